#pragma once

// Central home for every numeric tolerance and threshold used by the toolkit.
// Nothing here is tunable at runtime; keeping the knobs in one translation
// unit makes the desk-scale accuracy contract auditable at a glance.

namespace sindyn {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 6.283185307179586476925286766559005768;
inline constexpr double kHalfPi = 1.570796326794896619231321691639751442;

// --- core evaluation ---------------------------------------------------
// exp(709) ~ 8.2e307 is the last comfortably finite rung; beyond it
// sinh/cosh of the imaginary part overflow double range.
inline constexpr double kSinhArgLimit = 709.0;
// |x| below this uses libm sinh/cosh directly (better relative error near 0);
// above it one exp() call serves both functions.
inline constexpr double kSinhSwitch = 0.5;
// Real parts larger than this get explicit extended-precision reduction
// mod 2*pi before sin/cos (below it, libm's own reduction is already exact).
inline constexpr double kArgReduceThreshold = 2147483648.0;  // 2^31
// ...and beyond this the 64-bit-mantissa reduction would itself lose the
// quadrant, so evaluation falls back to libm (whose reduction is exact).
inline constexpr double kArgReduceCeiling = 1e15;

// --- Newton refinement --------------------------------------------------
inline constexpr double kNewtonStepTol = 1e-13;
inline constexpr int kNewtonMaxIter = 60;
// multiple roots (parabolic points) converge linearly; give them headroom
inline constexpr int kNewtonMaxIterSlow = 200;
inline constexpr double kRootResidualTol = 1e-10;

// --- periodic point bookkeeping ------------------------------------------
inline constexpr double kDedupRadius = 1e-8;
inline constexpr double kMinimalPeriodTol = 1e-8;
// |multiplier| within this band of 1 counts as indifferent
inline constexpr double kStabilityBand = 1e-9;
// rotation numbers are matched against p/q with q up to this bound
inline constexpr int kRotationMaxDenominator = 64;
inline constexpr double kRotationMatchTol = 1e-8;

// --- orbit classification -------------------------------------------------
inline constexpr double kAttractionTol = 1e-9;
inline constexpr int kAttractionWindow = 8;
inline constexpr double kEscapeRadiusFloor = 50.0;
inline constexpr double kEscapeRadiusFactor = 4.0;
// near-return radius that triggers a cycle-confirmation attempt
inline constexpr double kTrapRadius = 0.05;
// confirmed cycles must hold the trailing orbit inside this radius
inline constexpr double kTrapHoldRadius = 0.25;
// cadence (in steps) of settle checks for slowly converging orbits
inline constexpr int kSettleCheckInterval = 512;
// ring of trailing orbit points kept for near-return / settle analysis
inline constexpr int kOrbitRingSize = 64;
// |multiplier| < 1 - this margin counts as verified attraction
inline constexpr double kAttractingMargin = 1e-9;
// |multiplier| <= 1 + this slack admits a parabolic settle check
inline constexpr double kParabolicMultSlack = 1e-6;

// --- inverse branches and hairs -------------------------------------------
// punctured guard zone around the branch points +-1 of arcsin
inline constexpr double kBranchStandoff = 1e-12;
// ...but an exact (few-ulp) hit on +-1 is a well-defined endpoint value
inline constexpr double kBranchExactUlps = 4.0;
inline constexpr double kLandingTol = 1e-9;
inline constexpr double kLandingTolParabolic = 1e-6;
inline constexpr int kDefaultHairDepth = 30;
inline constexpr int kDefaultHairSamples = 12;
inline constexpr double kDefaultStartHeight = 10.0;
// curve translates closer than this flag a strip-partition failure
inline constexpr double kStripSeparationMin = 1e-9;

// --- grids, atlases, verdicts ----------------------------------------------
inline constexpr double kSquarePixelRelTol = 1e-9;
inline constexpr long kDefaultPixelBudget = 2000;
inline constexpr int kMaxRefinementSteps = 3;
inline constexpr double kRefineFrameFactor = 1.5;
inline constexpr double kCycleMatchTol = 1e-6;
inline constexpr double kSymmetryAgreementTol = 1e-4;
// component must grow by at least this factor per refinement to stay
// "unbounded-suspected" rather than "undetermined"
inline constexpr double kGrowthFactorMin = 1.02;

// --- escape machinery ----------------------------------------------------
inline constexpr int kChainStepCap = 5;
inline constexpr double kChainC1Min = 10.0;
inline constexpr int kChainNMin = 4;
inline constexpr int kInductionStepCap = 8;

// --- misc ------------------------------------------------------------------
inline constexpr double kRealAxisTol = 1e-12;
inline constexpr double kIntervalSlack = 1e-12;
inline constexpr unsigned long long kDefaultSeed = 0x53494E44ull;  // "SIND"

}  // namespace sindyn
