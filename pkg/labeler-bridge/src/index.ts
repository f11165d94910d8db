export * from "./protocol.js";
export * from "./annotations.js";
export * from "./html.js";
export * from "./model.js";
export * from "./labelers.js";
export * from "./serve.js";
export * from "./train.js";
