#pragma once

#include <filesystem>
#include <iosfwd>

#include "ipm/sim.hpp"

namespace ipm {

// Binary layout (little-endian):
//   "IPMS" | u32 version=1 | u8 dims | u64 N | u64 steps | f64 h |
//   dims*N*(steps+1) f64 in (dim, particle, time) order.
inline constexpr std::uint32_t kTrajectoryVersion = 1;

void write_trajectory(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory(std::istream& is);

void write_trajectory(const std::filesystem::path& file, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& file);

/// Header "t,x_0,...,x_{N-1}[,y_0,...]" then one row per grid point.
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj);

}  // namespace ipm
