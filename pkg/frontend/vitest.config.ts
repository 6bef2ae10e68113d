import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
    // the e2e file boots the Python relay, which trains the classifier first
    testTimeout: 15000,
    hookTimeout: 30000,
  },
});
