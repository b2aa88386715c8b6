/**
 * Explorer state: the loaded bundle, the live weight vectors, and the
 * currently rendered fused image.
 *
 * Every mutation clamps incoming values to [0, 1] and re-renders
 * synchronously, so `rendered` never goes stale and no interaction sequence
 * can leave a weight outside the unit interval.
 */

import { parseBundle, type UiBundle } from "./bundle.js";
import { diskMembership, fuseGlobal, fuseRegion } from "./fusion.js";

export interface RegionGeometry {
  cx: number;
  cy: number;
  radius: number;
}

function clamp01(value: number): number {
  if (!Number.isFinite(value)) return 0;
  return value < 0 ? 0 : value > 1 ? 1 : value;
}

export class ExplorerState {
  readonly bundle: UiBundle;

  /** Global per-frame weights; all ones right after load (normal view). */
  weights: number[];
  regionMode = false;
  innerWeights: number[];
  outerWeights: number[];
  region: RegionGeometry;

  /** Last fused output; recomputed on every change. */
  rendered: Float64Array;
  renderCount = 0;

  private normalViewActive = false;
  private stashedWeights: number[] | null = null;

  private constructor(bundle: UiBundle) {
    this.bundle = bundle;
    this.weights = new Array(bundle.m).fill(1);
    this.innerWeights = new Array(bundle.m).fill(1);
    this.outerWeights = new Array(bundle.m).fill(1);
    this.region = {
      cx: (bundle.width - 1) / 2,
      cy: (bundle.height - 1) / 2,
      radius: Math.min(bundle.width, bundle.height) / 4,
    };
    this.rendered = new Float64Array(bundle.width * bundle.height);
    this.render();
  }

  /** Parse + validate a JSON document; throws BundleFormatError on schema problems. */
  static load(doc: unknown): ExplorerState {
    return new ExplorerState(parseBundle(doc));
  }

  setWeight(index: number, value: number): void {
    this.requireIndex(index);
    this.leaveNormalView();
    this.weights[index] = clamp01(value);
    this.render();
  }

  setWeights(values: number[]): void {
    this.leaveNormalView();
    this.weights = values.map(clamp01).slice(0, this.bundle.m);
    while (this.weights.length < this.bundle.m) this.weights.push(0);
    this.render();
  }

  setInnerWeight(index: number, value: number): void {
    this.requireIndex(index);
    this.innerWeights[index] = clamp01(value);
    this.render();
  }

  setOuterWeight(index: number, value: number): void {
    this.requireIndex(index);
    this.outerWeights[index] = clamp01(value);
    this.render();
  }

  setRegionMode(on: boolean): void {
    this.regionMode = on;
    this.render();
  }

  setRegion(geometry: RegionGeometry): void {
    this.region = {
      cx: geometry.cx,
      cy: geometry.cy,
      radius: Math.max(0, geometry.radius),
    };
    this.render();
  }

  /**
   * Flip the unaided-eye preview: on sets every weight to 1, off restores
   * the exact weights from before. Toggling twice is the identity.
   */
  toggleNormalView(): void {
    if (this.normalViewActive) {
      this.weights = this.stashedWeights ?? this.weights;
      this.stashedWeights = null;
      this.normalViewActive = false;
    } else {
      this.stashedWeights = this.weights.slice();
      this.weights = new Array(this.bundle.m).fill(1);
      this.normalViewActive = true;
    }
    this.render();
  }

  get isNormalView(): boolean {
    return this.normalViewActive;
  }

  private leaveNormalView(): void {
    if (this.normalViewActive) {
      this.weights = this.stashedWeights ?? this.weights;
      this.stashedWeights = null;
      this.normalViewActive = false;
    }
  }

  private requireIndex(index: number): void {
    if (!Number.isInteger(index) || index < 0 || index >= this.bundle.m) {
      throw new Error(`slider index ${index} out of range (M=${this.bundle.m})`);
    }
  }

  private render(): void {
    const { frames, fusionMode, width, height } = this.bundle;
    if (this.regionMode) {
      const membership = diskMembership(
        width,
        height,
        this.region.cx,
        this.region.cy,
        this.region.radius
      );
      this.rendered = fuseRegion(
        frames,
        this.innerWeights,
        this.outerWeights,
        membership,
        fusionMode
      );
    } else {
      this.rendered = fuseGlobal(frames, this.weights, fusionMode);
    }
    this.renderCount += 1;
  }
}
