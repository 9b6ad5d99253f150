import { defineConfig } from "vitest/config";

// Dev-server proxy lets `npm run dev` talk to a local `grammarctl serve`;
// the production bundle is served by grammarctl itself via --ui-dir.
export default defineConfig({
  base: "./",
  server: {
    proxy: { "/api": "http://127.0.0.1:8080" },
  },
  build: {
    outDir: "dist",
  },
  test: {
    environment: "jsdom",
  },
});
