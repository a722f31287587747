const CITY_KEY = "cabfare.city";

export function loadSelectedCity(): string | null {
  try {
    return window.localStorage.getItem(CITY_KEY);
  } catch {
    return null;
  }
}

export function saveSelectedCity(code: string): void {
  try {
    window.localStorage.setItem(CITY_KEY, code);
  } catch {
    // private-mode storage failures are non-fatal; selection just won't stick
  }
}
