import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The contract suite spawns the real Python service and trains nothing,
    // but model init + first synthesis takes a few seconds.
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
