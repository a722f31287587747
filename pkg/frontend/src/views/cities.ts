import type { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import { loadSelectedCity, saveSelectedCity } from "../state.js";
import type { City } from "../types.js";

export interface CityPicker {
  render(container: HTMLElement): Promise<void>;
}

/**
 * City selection screen. The configured cities come from the service; the
 * chosen code is persisted locally so it survives reloads. If the service is
 * unreachable a retry banner is shown instead of crashing.
 */
export function createCityPicker(
  api: ApiClient,
  onSelect: (city: City) => void,
): CityPicker {
  async function render(container: HTMLElement): Promise<void> {
    clear(container);
    let cities: City[];
    try {
      cities = await api.getCities();
    } catch {
      const banner = el("div", { class: "banner error", role: "alert" }, [
        "Service unreachable. ",
      ]);
      const retry = el("button", { class: "retry", text: "Retry" });
      retry.addEventListener("click", () => void render(container));
      banner.append(retry);
      container.append(banner);
      return;
    }

    const remembered = loadSelectedCity();
    const heading = el("h2", { text: "Choose your city" });
    const list = el("div", { class: "city-list" });
    for (const city of cities) {
      const button = el("button", {
        class: "city-option" + (city.code === remembered ? " selected" : ""),
        "data-city": city.code,
        text: city.display_name,
      });
      button.addEventListener("click", () => {
        saveSelectedCity(city.code);
        onSelect(city);
      });
      list.append(button);
    }
    container.append(heading, list);

    const rememberedCity = cities.find((c) => c.code === remembered);
    if (rememberedCity) onSelect(rememberedCity);
  }

  return { render };
}
