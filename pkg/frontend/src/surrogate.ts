/**
 * Deterministic surrogate validation loss over the three tuning parameters.
 *
 * Closed form (so tests can hand-compute expectations):
 *
 *   loss(b, r, n) = 0.08
 *                 + 0.6 * ((b - 12)  / 63)^2
 *                 + 0.8 * ((r - 0.30) / 0.8)^2
 *                 + 0.7 * ((n - 220) / 450)^2
 *                 + amplitude * (noise(seed, b, r, n) - 0.5)
 *
 * with noise(...) a uniform hash into [0, 1). The noiseless minimum is
 * BASE_LOSS = 0.08 at (batch_size=12, dropout_rate=0.30, neurons=220),
 * strictly inside the stock tuning box ([1,64] x [0.1,0.9] x [50,500]).
 *
 * Documented basin: a configuration "found the bowl" when its noiseless
 * quadratic excess (loss minus noise minus BASE_LOSS) is below 0.02.
 *
 * The default noise amplitude (0.004) is small against the bowl depth, so
 * the landscape stays smooth while still exercising seed handling. Loss is
 * finite and positive everywhere on the box: the quadratic terms are
 * non-negative and bounded by ~1.0, and |noise contribution| <= amplitude/2.
 */

export interface SurrogateModel {
  baseLoss: number;
  batchWeight: number;
  batchOptimum: number;
  dropoutWeight: number;
  dropoutOptimum: number;
  neuronsWeight: number;
  neuronsOptimum: number;
  noiseAmplitude: number;
  seed: number;
}

export const BASIN_QUADRATIC_EXCESS = 0.02;

export function defaultModel(seed: number): SurrogateModel {
  return {
    baseLoss: 0.08,
    batchWeight: 0.6,
    batchOptimum: 12,
    dropoutWeight: 0.8,
    dropoutOptimum: 0.3,
    neuronsWeight: 0.7,
    neuronsOptimum: 220,
    noiseAmplitude: 0.004,
    seed,
  };
}

function mix32(h: number, x: number): number {
  h = (h ^ x) >>> 0;
  h = Math.imul(h ^ (h >>> 16), 0x45d9f3b) >>> 0;
  h = Math.imul(h ^ (h >>> 16), 0x45d9f3b) >>> 0;
  return (h ^ (h >>> 16)) >>> 0;
}

const FLOAT_VIEW = new DataView(new ArrayBuffer(8));

function hashFloat(h: number, value: number): number {
  FLOAT_VIEW.setFloat64(0, value);
  return mix32(mix32(h, FLOAT_VIEW.getUint32(0)), FLOAT_VIEW.getUint32(4));
}

/** Uniform [0, 1) value, a pure function of (seed, b, r, n). */
export function unitNoise(seed: number, b: number, r: number, n: number): number {
  let h = mix32(0x9e3779b9, seed >>> 0);
  h = hashFloat(h, b);
  h = hashFloat(h, r);
  h = hashFloat(h, n);
  return h / 4294967296;
}

export function quadraticExcess(model: SurrogateModel, b: number, r: number, n: number): number {
  const ub = (b - model.batchOptimum) / 63.0;
  const ur = (r - model.dropoutOptimum) / 0.8;
  const un = (n - model.neuronsOptimum) / 450.0;
  return model.batchWeight * ub * ub
    + model.dropoutWeight * ur * ur
    + model.neuronsWeight * un * un;
}

export function surrogateLoss(model: SurrogateModel, b: number, r: number, n: number): number {
  const noise = model.noiseAmplitude * (unitNoise(model.seed, b, r, n) - 0.5);
  return model.baseLoss + quadraticExcess(model, b, r, n) + noise;
}
