#pragma once

namespace entirelab::defaults {

// Central table of numeric defaults.  Every tuning constant that shapes a
// reported result lives here so runs are auditable.

inline constexpr double kAngularTol = 1e-10;       // circle extrema refinement
inline constexpr int kMinCircleSamples = 64;       // coarse sampling floor
inline constexpr int kMaxAutoCircleSamples = 1 << 15;

inline constexpr int kMinModulusSubgrid = 32;      // rho subdivisions for (a3)/(a4)

inline constexpr int kHarnackCircles = 256;        // positivity pre-check grid
inline constexpr int kHarnackAngles = 256;

inline constexpr double kNewtonResidual = 1e-12;   // periodic point refinement
inline constexpr int kNewtonMaxSteps = 50;

inline constexpr int kWindingInitialNodes = 64;    // per edge
inline constexpr int kWindingMaxNodes = 1 << 20;   // total, then QuadratureStall
inline constexpr double kWindingSnap = 0.25;       // distance to integer
inline constexpr double kBoundaryZeroTol = 1e-9;   // relative to box diameter
inline constexpr int kBoundaryMaxDilations = 8;
inline constexpr double kBoundaryDilation = 1.0 + 1e-6;

inline constexpr double kOrbitResidualTol = 1e-9;  // PeriodicOrbit invariant
inline constexpr double kOrbitDedupTol = 1e-6;     // orbit identification
inline constexpr double kClassifyTol = 1e-9;       // repelling/indifferent band

inline constexpr double kShrink = 0.9;             // (1-o(1)) radius factor
inline constexpr double kTheorem2Beta = 1e-10;     // beta in the (1d) ratio

inline constexpr double kIndifferentTol = 1e-7;    // |lambda| <= 1 + tol
inline constexpr double kClusterTolScale = 1e-8;   // critical-value clustering
inline constexpr double kRootResidual = 1e-10;     // polynomial root acceptance
inline constexpr int kMaxIterateDegree = 4096;

inline constexpr double kPreimageResidual = 1e-10; // Newton in log coordinates
inline constexpr int kPreimageMaxSteps = 50;

}  // namespace entirelab::defaults
