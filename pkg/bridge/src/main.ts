import { loadFiller, loadVictim } from "./backends.js";
import { defaultConfig, loadConfig } from "./config.js";
import { BridgeState, createApp } from "./server.js";

async function main(): Promise<void> {
  const configPath = process.argv[2];
  const config = configPath ? loadConfig(configPath) : defaultConfig();
  const state: BridgeState = { ready: false };
  const app = createApp(config, state);
  const server = app.listen(config.port, () => {
    console.log(`bridge listening on :${config.port} (loading models)`);
  });
  try {
    state.victim = await loadVictim(config.victim);
    state.filler = await loadFiller(config.filler);
    state.ready = true;
    console.log(`models ready: victim=${config.victim.kind} filler=${config.filler.kind}`);
  } catch (err) {
    console.error(`model load failed: ${err}`);
    server.close();
    process.exit(1);
  }
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
