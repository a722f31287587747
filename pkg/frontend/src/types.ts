// Shapes of the service API payloads. The UI never derives numbers from
// these: amount/savings strings are rendered exactly as received.

export interface ProviderInfo {
  id: string;
  short_name: string;
  color: string;
}

export interface City {
  code: string;
  display_name: string;
  currency: string;
  providers: { metered: ProviderInfo; flex: ProviderInfo };
  button_label: string;
}

export interface GeocodeResult {
  name: string;
  lat: number;
  lng: number;
}

export interface Estimate {
  provider: string;
  method: string;
  amount: string;
  amount_minor: number;
  currency: string;
  corrected: boolean;
  surge_multiplier: number;
}

export interface ComparisonResponse {
  query_id: string;
  city: string;
  currency: string;
  submitted_at: string;
  origin: { lat: number; lng: number };
  destination: { lat: number; lng: number };
  estimates: Estimate[];
  winner: string;
  savings: string;
  savings_minor: number;
}

export interface ResolvedPlace {
  name: string;
  lat: number;
  lng: number;
}
