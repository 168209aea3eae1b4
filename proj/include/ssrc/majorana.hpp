#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ssrc/hilbert.hpp"
#include "ssrc/schwinger.hpp"

namespace ssrc {

// A single-particle creation direction cos(theta/2) b^dag + e^{i phi} sin(theta/2) a^dag.
struct MajoranaPoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)
};

struct MajoranaSpec {
  std::vector<MajoranaPoint> points;
  ModePair pair{0, 1};
  // Largest root condition estimate found by the inverse map (0 for forward specs).
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
};

inline constexpr double kIllConditionedThreshold = 1e12;

// Product of the N single-particle factors applied to the vacuum, normalized. K = 2 only.
SSRCState majorana_to_state(const MajoranaSpec& spec, const BasisPtr& basis);

// Inverse map via companion-matrix roots. Coincident roots are merged when that does not
// reduce reconstruction fidelity. Logs a warning when the condition estimate exceeds 1e12.
MajoranaSpec state_to_majorana(const SSRCState& state);

// Unit vector on the sphere for a point.
Eigen::Vector3d bloch_vector(const MajoranaPoint& point);

// Applies a single-particle unitary, given in the (b, a) ordering of the one-photon basis,
// to every point.
std::vector<MajoranaPoint> transform_points(const std::vector<MajoranaPoint>& points, const Eigen::Matrix2cd& u);

// R(theta, phi) on the one-photon space, in (b, a) ordering.
Eigen::Matrix2cd single_particle_rotation(double theta, double phi);

struct PointMatch {
  double max_distance = 0.0;
  double rms_distance = 0.0;
  std::vector<int> assignment;
};

// Optimal matching of two equal-size point multisets under chordal distance.
PointMatch match_points(const std::vector<MajoranaPoint>& a, const std::vector<MajoranaPoint>& b);

}  // namespace ssrc
