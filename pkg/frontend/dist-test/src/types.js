// Shapes mirroring the service's JSON bodies.
export {};
