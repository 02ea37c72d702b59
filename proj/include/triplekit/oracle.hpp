#pragma once

// Tripotent oracles: black-box maps defined on the tripotents of a factor,
// the interface the reconstruction algorithms consume. An oracle only
// promises images of tripotents; every call re-checks that the image is a
// tripotent. Oracles come from a generated ground truth (a RealLinearMap),
// from a finite lookup table, or from user code.

#include <functional>
#include <utility>
#include <vector>

#include "triplekit/linear_map.hpp"
#include "triplekit/tripotent.hpp"

namespace triplekit {

enum class OracleProvenance { generated, table, external };

class TripotentOracle {
 public:
  TripotentOracle(FactorDescriptor domain, FactorDescriptor target,
                  std::function<Element(const Element&)> fn,
                  OracleProvenance provenance = OracleProvenance::external, Tolerance tol = {})
      : domain_(std::move(domain)),
        target_(std::move(target)),
        fn_(std::move(fn)),
        provenance_(provenance),
        tol_(tol) {}

  const FactorDescriptor& domain() const { return domain_; }
  const FactorDescriptor& target() const { return target_; }
  OracleProvenance provenance() const { return provenance_; }

  Element operator()(const Element& x) const {
    if (x.factor() != domain_)
      throw shape_error("oracle: argument lives in " + x.factor().describe() + ", domain is " +
                        domain_.describe());
    Element y = fn_(x);
    if (y.factor() != target_)
      throw structure_error("oracle: image lives in " + y.factor().describe() + ", target is " +
                            target_.describe());
    if (!is_tripotent(y, tol_))
      throw structure_error("oracle: image failed the tripotent check (residual " +
                            std::to_string(tripotent_residual(y)) + ")");
    return y;
  }

 private:
  FactorDescriptor domain_, target_;
  std::function<Element(const Element&)> fn_;
  OracleProvenance provenance_;
  Tolerance tol_;
};

// Wrap a ground-truth map as an oracle.
inline TripotentOracle make_oracle(const RealLinearMap& truth, Tolerance tol = {},
                                   OracleProvenance provenance = OracleProvenance::generated) {
  return TripotentOracle(
      truth.domain, truth.target, [truth](const Element& x) { return truth.apply(x); },
      provenance, tol);
}

// Finite lookup table {in -> out}; inputs are matched within tolerance.
inline TripotentOracle make_table_oracle(FactorDescriptor domain, FactorDescriptor target,
                                         std::vector<std::pair<Element, Element>> entries,
                                         Tolerance tol = {}) {
  auto table = std::make_shared<std::vector<std::pair<Element, Element>>>(std::move(entries));
  auto fn = [table, tol](const Element& x) -> Element {
    for (auto& [in, out] : *table)
      if (norm(in - x) <= tol.bound(std::max(1.0, norm(x)))) return out;
    throw structure_error("table oracle: tripotent not covered by the table");
  };
  return TripotentOracle(std::move(domain), std::move(target), std::move(fn),
                         OracleProvenance::table, tol);
}

// ---------------------------------------------------------------------------
// Generated ground truths.

inline RealLinearMap identity_map(const FactorDescriptor& f) {
  return RealLinearMap::single(f, f, Branch::linear,
                               Matrix::Identity(f.complex_dim(), f.complex_dim()));
}

// Spin ground truth x -> lambda0 * O x (linear) or x -> lambda0 * O conj(x)
// (antilinear) for a seeded random rotation O of the real form.
inline RealLinearMap spin_rotation_map(int d, cplx lambda0, std::uint64_t seed,
                                       Branch branch = Branch::linear) {
  Rng rng(seed);
  Eigen::MatrixXd o = haar_orthogonal(d, rng);
  FactorDescriptor f = FactorDescriptor::spin(d);
  return RealLinearMap::single(f, f, branch, (lambda0 * o.cast<cplx>()).eval());
}

// The four product forms on rectangular factors. The numbering follows the
// standard classification of triple automorphisms of square type 1 factors:
//   1: X -> U X V          (linear)
//   2: X -> U conj(X) V    (conjugate-linear)
//   3: X -> U X* V         (conjugate-linear, transposed)
//   4: X -> U X^T V        (linear, transposed)
enum class RectForm : int { plain = 1, conj = 2, adjoint = 3, transpose = 4 };

inline bool rect_form_transposes(RectForm f) {
  return f == RectForm::adjoint || f == RectForm::transpose;
}

inline Branch rect_form_branch(RectForm f) {
  return (f == RectForm::conj || f == RectForm::adjoint) ? Branch::antilinear : Branch::linear;
}

// Rect ground truth with seeded Haar unitaries U, V. Transposing forms on an
// m-by-n factor land in rect(n,m).
inline RealLinearMap rect_product_map(int m, int n, std::uint64_t seed,
                                      RectForm form = RectForm::plain) {
  Rng rng(seed);
  const bool tr = rect_form_transposes(form);
  const int out_rows = tr ? n : m;
  const int out_cols = tr ? m : n;
  Matrix u = haar_unitary(out_rows, rng);
  Matrix v = haar_unitary(out_cols, rng);
  FactorDescriptor domain = FactorDescriptor::rect(m, n);
  FactorDescriptor target = FactorDescriptor::rect(out_rows, out_cols);
  auto fn = [u, v, form](const Element& x) -> Element {
    Matrix g;
    switch (form) {
      case RectForm::plain: g = x.matrix(); break;
      case RectForm::conj: g = x.matrix().conjugate(); break;
      case RectForm::adjoint: g = x.matrix().adjoint(); break;
      case RectForm::transpose: g = x.matrix().transpose(); break;
    }
    Matrix y = u * g * v;
    return Element(FactorDescriptor::rect(static_cast<int>(y.rows()), static_cast<int>(y.cols())),
                   y);
  };
  return RealLinearMap::from_function(domain, target, rect_form_branch(form), fn);
}

// Assemble a sum ground truth from per-component maps and a routing sigma:
// component i of the domain is sent through comps[i] into target slot
// sigma[i]. The target factor is derived from the component targets.
inline RealLinearMap sum_routing_map(const FactorDescriptor& domain, const std::vector<int>& sigma,
                                     const std::vector<RealLinearMap>& comps) {
  const auto& dcomps = domain.components();
  if (domain.kind() != FactorKind::sum || sigma.size() != dcomps.size() ||
      comps.size() != dcomps.size())
    throw shape_error("sum_routing_map: sigma/components must match the domain components");
  std::vector<FactorDescriptor> tcomps(dcomps.size(), FactorDescriptor::spin(3));
  std::vector<bool> used(dcomps.size(), false);
  for (size_t i = 0; i < dcomps.size(); ++i) {
    int t = sigma[i];
    if (t < 0 || t >= static_cast<int>(dcomps.size()) || used[static_cast<size_t>(t)])
      throw shape_error("sum_routing_map: sigma is not a permutation");
    used[static_cast<size_t>(t)] = true;
    if (comps[i].domain != dcomps[i])
      throw shape_error("sum_routing_map: component map " + std::to_string(i) +
                        " has wrong domain");
    tcomps[static_cast<size_t>(t)] = comps[i].target;
  }
  RealLinearMap m;
  m.domain = domain;
  m.target = FactorDescriptor::sum(tcomps);
  for (size_t i = 0; i < dcomps.size(); ++i)
    m.blocks.push_back(RealLinearMap::Block{static_cast<int>(i), sigma[i],
                                            comps[i].blocks.at(0).branch,
                                            comps[i].blocks.at(0).L});
  return m;
}

}  // namespace triplekit
