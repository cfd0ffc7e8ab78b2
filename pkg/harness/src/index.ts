export { CastingTable, scanUserTypes } from "./casting.js";
export { methodNameOf, renderDualModule, stripDecorators } from "./dual.js";
export { parseJUnitXml, runPrimal } from "./runtime.js";
export type { RuntimeConfig } from "./runtime.js";
export { collectUserClasses, validateInIsolation } from "./validate.js";
export type { ValidateRequest, ValidateResponse } from "./validate.js";
export { defaultConfig, handleRequest, serve } from "./server.js";
