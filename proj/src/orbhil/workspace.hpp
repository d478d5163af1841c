#pragma once

#include "orbhil/math.hpp"

namespace orbhil {

// Base-frame transform direction for the hybrid loop.
enum class FrameDirection { ToBase, ToInertial };

using FrameTransform = Pose;

// Expresses `pose` in the base frame (ToBase) or back in the inertial frame
// (ToInertial); the two directions compose to the identity.
Pose transform_pose(const Pose& pose, const FrameTransform& base_pose, FrameDirection direction);

// Similarity map from simulation base-frame coordinates into one arm's
// workspace: position scaled, rotated by the alignment, then offset;
// orientation composed with the alignment.
struct WorkspaceMap {
  double scale = 0.25;               // arm meters per simulation meter
  Vec3 offset = Vec3::Zero();        // arm base frame
  Quat align = Quat::Identity();
  double reach_bound = 0.85;         // m, from the arm base

  void validate() const;
};

// Throws Error(OutOfWorkspace) when the mapped point exceeds the reach bound.
Pose map_to_arm_workspace(const Pose& relative_pose, const WorkspaceMap& map);

// Exact inverse of map_to_arm_workspace (no reach check).
Pose map_from_arm_workspace(const Pose& arm_pose, const WorkspaceMap& map);

}  // namespace orbhil
