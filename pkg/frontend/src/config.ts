// The one piece of configuration: where the scenecrit service lives.
// Build-time override via VITE_API_URL, runtime override via ?api=<url>.

const DEFAULT_BASE = "http://127.0.0.1:8099";

export function apiBase(search?: string): string {
  const query = search ?? (typeof location !== "undefined" ? location.search : "");
  const fromQuery = new URLSearchParams(query).get("api");
  if (fromQuery) return stripSlash(fromQuery);
  const fromEnv = import.meta.env?.VITE_API_URL as string | undefined;
  if (fromEnv) return stripSlash(fromEnv);
  return DEFAULT_BASE;
}

function stripSlash(url: string): string {
  return url.endsWith("/") ? url.slice(0, -1) : url;
}
