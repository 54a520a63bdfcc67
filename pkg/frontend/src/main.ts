// Bootstrap: sign in (or register) against the configured backend, then
// render the Answer Questions view as the entry point.

import { ApiClient } from "./api";
import { AppController } from "./controller";
import { renderApp } from "./views";

declare global {
  interface Window {
    FEEDLEDGER_BASE?: string;
  }
}

const STORAGE_KEY = "feedledger-credentials";

async function establishSession(controller: AppController): Promise<void> {
  const saved = window.localStorage.getItem(STORAGE_KEY);
  if (saved) {
    try {
      const creds = JSON.parse(saved) as { address: string; accessKey: string };
      await controller.login(creds.address, creds.accessKey);
      return;
    } catch {
      window.localStorage.removeItem(STORAGE_KEY);
    }
  }
  const pseudonym = window.prompt(
    "Pick a pseudonym (leave empty for a generated one). No personal data, please.",
  );
  await controller.register(pseudonym || undefined);
  if (controller.session?.accessKey) {
    window.localStorage.setItem(
      STORAGE_KEY,
      JSON.stringify({
        address: controller.session.address,
        accessKey: controller.session.accessKey,
      }),
    );
  }
}

async function start(): Promise<void> {
  const mount = document.querySelector<HTMLElement>("#app");
  if (!mount) throw new Error("missing #app mount point");
  const api = new ApiClient(window.FEEDLEDGER_BASE ?? "");
  const controller = new AppController(api);
  await establishSession(controller);
  await controller.showView("question");
  renderApp(mount, controller);
}

start().catch((error) => {
  const mount = document.querySelector<HTMLElement>("#app");
  if (mount) mount.textContent = `Could not reach the feedback service: ${error}`;
});
