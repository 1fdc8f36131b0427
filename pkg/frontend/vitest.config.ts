import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The integration suite boots the Python service once per file.
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
