#pragma once

#include <stdexcept>
#include <string>

namespace tautpath {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// mesh_core
struct MalformedHeader : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct NonFiniteSample : Error {
  using Error::Error;
};
struct InvalidSpec : Error {
  using Error::Error;
};
struct NodataInInterior : Error {
  using Error::Error;
};
struct DegenerateTriangulation : Error {
  using Error::Error;
};
struct SpacingTooCoarse : Error {
  using Error::Error;
};
struct UnsupportedFaceArity : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct EmptyResult : Error {
  using Error::Error;
};

// truss_convert
struct AnchorTooFar : Error {
  using Error::Error;
};
struct AnchorsCoincide : Error {
  using Error::Error;
};

// relax_solver
struct NonConvergence : Error {
  using Error::Error;
};
struct NumericalBlowup : Error {
  using Error::Error;
};
struct AnchorsDisconnected : Error {
  using Error::Error;
};

// path_extract
struct NoChain : Error {
  using Error::Error;
};

// graph_oracle
struct Unreachable : Error {
  using Error::Error;
};
struct NotOnSphere : Error {
  using Error::Error;
};

}  // namespace tautpath
