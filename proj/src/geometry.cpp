#include "spinenav/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <queue>

namespace spinenav {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateMotion: return "DegenerateMotion";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::AmbiguousPath: return "AmbiguousPath";
    case ErrorKind::CollinearPoints: return "CollinearPoints";
    case ErrorKind::NoCorrespondences: return "NoCorrespondences";
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NameMismatch: return "NameMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateMotion:
    case ErrorKind::SingularMatrix:
    case ErrorKind::CollinearPoints:
    case ErrorKind::NoCorrespondences:
      return true;
    default:
      return false;
  }
}

namespace {

double rotation_drift(const Eigen::Matrix3d& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

}  // namespace

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(2) < 1e-12) {
    throw SingularMatrixError("matrix is rank-deficient, no nearby rotation");
  }
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Vector3d signs(1.0, 1.0, (u * v.transpose()).determinant() < 0 ? -1.0 : 1.0);
  return u * signs.asDiagonal() * v.transpose();
}

RigidTransform::RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  if (rotation_drift(rotation_) > 1e-12 || rotation_.determinant() < 0) {
    rotation_ = orthonormalize(rotation_);
  }
}

RigidTransform RigidTransform::from_quaternion(double qw, double qx, double qy, double qz,
                                               const Eigen::Vector3d& translation) {
  Eigen::Quaterniond q(qw, qx, qy, qz);
  if (std::abs(q.norm() - 1.0) > 1e-3) {
    throw InvalidParamsError("quaternion norm deviates from 1 by more than 1e-3");
  }
  q.normalize();
  return {q.toRotationMatrix(), translation};
}

RigidTransform RigidTransform::about_axis(const Eigen::Vector3d& axis, double angle_rad,
                                          const Eigen::Vector3d& translation) {
  const double n = axis.norm();
  if (n < 1e-12) {
    throw InvalidParamsError("rotation axis has near-zero length");
  }
  return {Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix(), translation};
}

Eigen::Vector4d RigidTransform::quaternion_wxyz() const {
  Eigen::Quaterniond q(rotation_);
  q.normalize();
  if (q.w() < 0) {
    q.coeffs() = -q.coeffs();
  }
  return {q.w(), q.x(), q.y(), q.z()};
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  // RigidTransform's constructor re-orthonormalizes when drift exceeds 1e-12.
  return {a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation()};
}

RigidTransform invert(const RigidTransform& t) {
  const Eigen::Matrix3d rt = t.rotation().transpose();
  return {rt, -(rt * t.translation())};
}

Eigen::Vector3d apply(const RigidTransform& t, const Eigen::Vector3d& p) {
  return t.rotation() * p + t.translation();
}

double transform_distance(const RigidTransform& a, const RigidTransform& b) {
  return (a.rotation() - b.rotation()).norm() + (a.translation() - b.translation()).norm();
}

const char* to_string(FrameId id) {
  switch (id) {
    case FrameId::OT: return "OT";
    case FrameId::S: return "S";
    case FrameId::CT: return "CT";
    case FrameId::KukaEE: return "KukaEE";
    case FrameId::Tool: return "Tool";
    case FrameId::Tip: return "Tip";
  }
  return "?";
}

FrameId frame_from_string(const std::string& name) {
  if (name == "OT") return FrameId::OT;
  if (name == "S") return FrameId::S;
  if (name == "CT") return FrameId::CT;
  if (name == "KukaEE") return FrameId::KukaEE;
  if (name == "Tool") return FrameId::Tool;
  if (name == "Tip") return FrameId::Tip;
  throw ParseFailure("unknown frame id '" + name + "'");
}

void FrameGraph::insert(FrameId from, FrameId to, const RigidTransform& transform) {
  if (from == to) {
    throw InvalidParamsError("frame graph edge must connect distinct frames");
  }
  edges_.push_back({from, to, transform});
}

bool FrameGraph::contains(FrameId frame) const {
  for (const Edge& e : edges_) {
    if (e.from == frame || e.to == frame) return true;
  }
  return false;
}

RigidTransform FrameGraph::resolve(FrameId from, FrameId to) const {
  if (from == to) {
    return RigidTransform::identity();
  }
  if (!contains(from) || !contains(to)) {
    throw NoPathError(std::string("frame ") + to_string(from) + " -> " + to_string(to) +
                      " not connected");
  }

  // BFS from `from`, accumulating reached[f] = transform mapping `from`
  // coordinates into f coordinates.
  std::map<FrameId, RigidTransform> reached;
  reached.emplace(from, RigidTransform::identity());
  std::queue<FrameId> frontier;
  frontier.push(from);
  while (!frontier.empty()) {
    const FrameId cur = frontier.front();
    frontier.pop();
    for (const Edge& e : edges_) {
      if (e.from == cur && !reached.count(e.to)) {
        reached.emplace(e.to, compose(e.transform, reached.at(cur)));
        frontier.push(e.to);
      } else if (e.to == cur && !reached.count(e.from)) {
        reached.emplace(e.from, compose(invert(e.transform), reached.at(cur)));
        frontier.push(e.from);
      }
    }
  }

  if (!reached.count(to)) {
    throw NoPathError(std::string("frame ") + to_string(from) + " -> " + to_string(to) +
                      " not connected");
  }

  // Every registered edge between reached frames must agree with the BFS tree;
  // a disagreeing redundant edge means two routes would give different answers.
  for (const Edge& e : edges_) {
    auto a = reached.find(e.from);
    auto b = reached.find(e.to);
    if (a == reached.end() || b == reached.end()) continue;
    const RigidTransform via_tree = compose(b->second, invert(a->second));
    if (transform_distance(via_tree, e.transform) > kConsistencyTolerance) {
      throw AmbiguousPathError(std::string("edge ") + to_string(e.from) + " -> " +
                               to_string(e.to) + " disagrees with another registered route");
    }
  }

  return reached.at(to);
}

}  // namespace spinenav
