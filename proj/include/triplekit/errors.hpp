#pragma once

#include <stdexcept>
#include <string>

namespace triplekit {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed descriptor, wrong dimensions, data outside the declared subspace.
class shape_error : public error {
 public:
  using error::error;
};

// A caller obligation was not met (e.g. an argument that must be a tripotent
// is not one, or components of an orthogonal sum are not orthogonal).
class precondition_error : public error {
 public:
  using error::error;
};

// The input is numerically too ambiguous to classify (e.g. an eigenvalue of
// L(e,e) lands between the admissible values 0, 1/2, 1).
class degeneracy_error : public error {
 public:
  using error::error;
};

// A structural assumption of a reconstruction algorithm failed: an image that
// should be a scalar multiple is not, an image basis is not real/orthonormal,
// a grid image violates the grid axioms, a component image splits across
// several target components, and so on.
class structure_error : public error {
 public:
  using error::error;
};

}  // namespace triplekit
