import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    // The e2e file drives a live service; run files one at a time so its
    // timing assertion is not skewed by sibling workers.
    fileParallelism: false,
    include: ["tests/**/*.test.ts"],
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
