#pragma once

#include "qqm/dynamics.hpp"
#include "qqm/oracle.hpp"

// Bridge between the quaternion engine and the complex reference: a complex
// number embeds as w + x i with zero j,k parts.

namespace qqm {

// sqrt( sum |Psi_m - psi_m|^2 dx ), counting the j,k parts of Psi in full.
double field_distance_l2(const QField& a, const CField& b);

// Largest per-sample distance across two trajectories; throws if the sample
// times do not line up.
double max_trajectory_distance(const Trajectory& a, const CTrajectory& b);

CField complex_slice(const QField& f);    // drop j,k parts
QField embed_complex(const CField& f);    // lift with zero j,k parts

}  // namespace qqm
