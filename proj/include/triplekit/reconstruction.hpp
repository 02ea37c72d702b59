#pragma once

// Reconstruction of real-linear triple isomorphisms from order- and
// orthogonality-preserving bijections between tripotent sets.
//
// The pipeline: every such bijection multiplies circular orbits of tripotents
// by a fixed phase map f, which is either the identity or complex conjugation
// (detected through f(i)); once the branch is known, images of a real
// orthonormal basis (spin) or of the matrix-unit grid (rect) pin down a
// real-linear extension, which is then validated against the oracle on
// sampled tripotents of every rank. Direct sums route components through a
// recovered permutation and reconstruct blockwise.

#include <optional>
#include <string>
#include <vector>

#include "triplekit/grid.hpp"
#include "triplekit/oracle.hpp"
#include "triplekit/spin.hpp"

namespace triplekit {

// ---------------------------------------------------------------------------
// Phase maps.

// The phase ratio f with oracle(lambda * u) = f * oracle(u), normalized to the
// unit circle. Fails if the image leaves the complex line of oracle(u).
inline cplx extract_phase(const TripotentOracle& oracle, const Element& u, cplx lambda,
                          const Tolerance& tol = {}) {
  Element base = oracle(u);
  Element moved = oracle(lambda * u);
  cplx denom = inner(base, base);
  if (std::abs(denom) <= tol.bound(1.0))
    throw precondition_error("extract_phase: base image is zero");
  cplx f = inner(moved, base) / denom;
  if (norm(moved - f * base) > tol.bound(std::max(1.0, norm(moved))))
    throw structure_error("extract_phase: image of a circle orbit left the complex line of the "
                          "base image");
  double mod = std::abs(f);
  if (std::abs(mod - 1.0) > tol.bound(1.0))
    throw structure_error("extract_phase: phase ratio is not unimodular (|f| = " +
                          std::to_string(mod) + ")");
  return f / mod;
}

struct PhaseMapReport {
  cplx f_i;                    // value of the phase map at i
  Branch branch;               // from f(i) = +-i
  double multiplicativity;     // max |f(lm) - f(l) f(m)|
  double conjugation;          // max |f(conj l) - conj f(l)|
  double minus_one;            // |f(-1) + 1|
  double i_residual;           // distance of f(i) from {i, -i}
  double cross_agreement;      // max |f(l) via u - f(l) via u2|
  int n_pairs;
};

// Detect the branch of the phase map through f(i).
inline Branch detect_branch(const TripotentOracle& oracle, const Element& u,
                            const Tolerance& tol = {}) {
  cplx fi = extract_phase(oracle, u, cplx{0.0, 1.0}, tol);
  const cplx i{0.0, 1.0};
  double cutoff = std::max(tol.bound(1.0), 1e-6);
  if (std::abs(fi - i) <= cutoff) return Branch::linear;
  if (std::abs(fi + i) <= cutoff) return Branch::antilinear;
  throw structure_error("detect_branch: phase map is discontinuous (f(i) = " +
                        std::to_string(fi.real()) + (fi.imag() < 0 ? "-" : "+") +
                        std::to_string(std::abs(fi.imag())) + "i is near neither i nor -i)");
}

// Law checks for the phase map over seeded unimodular pairs, evaluated on two
// unrelated tripotents.
inline PhaseMapReport phase_map_report(const TripotentOracle& oracle, const Element& u,
                                       const Element& u2, int n_pairs, std::uint64_t seed,
                                       const Tolerance& tol = {}) {
  PhaseMapReport rep{};
  rep.n_pairs = n_pairs;
  Rng rng(seed);
  auto f = [&](cplx l) { return extract_phase(oracle, u, l, tol); };
  for (int k = 0; k < n_pairs; ++k) {
    cplx l = random_phase(rng);
    cplx m = random_phase(rng);
    rep.multiplicativity = std::max(rep.multiplicativity, std::abs(f(l * m) - f(l) * f(m)));
    rep.conjugation = std::max(rep.conjugation, std::abs(f(std::conj(l)) - std::conj(f(l))));
    rep.cross_agreement =
        std::max(rep.cross_agreement, std::abs(f(l) - extract_phase(oracle, u2, l, tol)));
  }
  rep.minus_one = std::abs(f(cplx{-1.0, 0.0}) + cplx{1.0, 0.0});
  rep.f_i = f(cplx{0.0, 1.0});
  const cplx i{0.0, 1.0};
  rep.i_residual = std::min(std::abs(rep.f_i - i), std::abs(rep.f_i + i));
  rep.branch = detect_branch(oracle, u, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Reports.

struct BlockReport {
  int domain_index = 0;
  int target_index = 0;
  Branch branch = Branch::linear;
  cplx lambda0{1.0, 0.0};
  double max_residual = 0.0;
  int product_form = 0;  // 1..4 for square rect blocks, 0 otherwise
};

struct ReconstructionReport {
  cplx lambda0{1.0, 0.0};  // of the first (or only) block
  Branch branch = Branch::linear;
  RealLinearMap map;
  double max_residual = 0.0;
  int n_samples = 0;
  std::vector<int> sigma;  // component routing (identity for plain factors)
  std::vector<BlockReport> blocks;
};

// ---------------------------------------------------------------------------
// Spin reconstruction.

inline ReconstructionReport reconstruct_spin(const TripotentOracle& oracle,
                                             const Tolerance& tol = {}, int n_samples = 300,
                                             std::uint64_t seed = 0) {
  const FactorDescriptor& domain = oracle.domain();
  if (domain.kind() != FactorKind::spin)
    throw precondition_error("reconstruct_spin: domain must be a spin factor");
  const int d = domain.spin_dim();
  if (oracle.target().kind() != FactorKind::spin || oracle.target().spin_dim() != d)
    throw structure_error("reconstruct_spin: target is not a spin factor of the same dimension "
                          "(got " + oracle.target().describe() + ")");

  // Step 1: image of the first real basis vector fixes the global phase.
  Element x1 = basis(domain, 0);
  SpinClassification c1 = classify_spin_tripotent(oracle(x1), tol);
  if (c1.kind != SpinTripotentKind::maximal)
    throw structure_error("reconstruct_spin: image of a maximal tripotent is not maximal");
  const cplx lambda0 = c1.lambda;

  // Step 2/3: detect the branch, then align phases so images of the real
  // basis become real vectors.
  Branch branch = detect_branch(oracle, x1, tol);
  auto aligned = [&](const Element& w) {
    Element y = std::conj(lambda0) * oracle(w);
    return branch == Branch::antilinear ? y.conj() : y;
  };

  // Step 4: images of the basis assemble the rotation.
  Eigen::MatrixXd u(d, d);
  for (int k = 0; k < d; ++k) {
    Vector y = vec(aligned(basis(domain, k)));
    if (y.imag().norm() > tol.bound(1.0) * d)
      throw structure_error("reconstruct_spin: image of basis vector " + std::to_string(k) +
                            " is not real after phase alignment");
    u.col(k) = y.real();
  }
  double gram = (u.transpose() * u - Eigen::MatrixXd::Identity(d, d)).norm();
  if (gram > std::sqrt(tol.bound(1.0)) * d)
    throw structure_error("reconstruct_spin: aligned basis images are not orthonormal (Gram "
                          "residual " + std::to_string(gram) + ")");

  ReconstructionReport rep;
  rep.lambda0 = lambda0;
  rep.branch = branch;
  rep.map = RealLinearMap::single(domain, oracle.target(), branch,
                                  (lambda0 * u.cast<cplx>()).eval());
  rep.sigma = {0};

  // Step 5: validate on sampled minimal and maximal tripotents.
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    Element w = random_tripotent(domain, 1 + s % 2, rng);
    rep.max_residual = std::max(rep.max_residual, norm(rep.map.apply(w) - oracle(w)));
  }
  rep.n_samples = n_samples;
  rep.blocks = {BlockReport{0, 0, branch, lambda0, rep.max_residual, 0}};
  return rep;
}

// ---------------------------------------------------------------------------
// Square automorphism classification (the four product forms of RectForm).

struct SquareAutomorphismReport {
  int form = 0;  // 1..4
  Matrix U, V;
  double residual = 0.0;  // max deviation of the map from the recovered form
};

inline SquareAutomorphismReport classify_square_automorphism(const RealLinearMap& map,
                                                             const Tolerance& tol = {},
                                                             std::uint64_t seed = 0) {
  const FactorDescriptor& f = map.domain;
  if (f.kind() != FactorKind::rect || f.rows() != f.cols() || map.target != f)
    throw precondition_error("classify_square_automorphism: map must act on a square rect factor");
  const int n = f.rows();
  const Branch branch = map.branch();

  auto unit = [&](int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return Element(f, e);
  };
  std::vector<std::vector<Matrix>> img(n, std::vector<Matrix>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) img[i][j] = map.apply(unit(i, j)).matrix();

  // Images of a row-collinear pair share left supports for product forms and
  // right supports for transposed forms.
  const Matrix& a = img[0][0];
  const Matrix& b = img[0][1];
  double dp = (a * a.adjoint() - b * b.adjoint()).norm();
  double dt = (a.adjoint() * a - b.adjoint() * b).norm();
  const bool transposed = dt < dp;

  auto cellimg = [&](int i, int j) -> const Matrix& { return transposed ? img[j][i] : img[i][j]; };

  // With N_ij = cellimg(i,j) = u_i v_j^T, recover the columns u_i of U and the
  // rows v_j^T of V.
  Eigen::JacobiSVD<Matrix> svd(cellimg(0, 0), Eigen::ComputeFullU);
  Vector u0 = svd.matrixU().col(0);
  Matrix v(n, n);
  for (int j = 0; j < n; ++j) v.row(j) = (u0.adjoint() * cellimg(0, j)).eval();
  Matrix uu(n, n);
  for (int i = 0; i < n; ++i) uu.col(i) = cellimg(i, 0) * v.row(0).transpose().conjugate();

  // Fix the reciprocal scalar pair (U,V) -> (mu U, conj(mu) V): make the first
  // nonzero entry of U's first column positive real.
  for (int i = 0; i < n; ++i) {
    double m = std::abs(uu(i, 0));
    if (m > 1e-8) {
      cplx phase = uu(i, 0) / m;
      uu *= std::conj(phase);
      v *= phase;
      break;
    }
  }

  double unitary_res = std::max((uu.adjoint() * uu - Matrix::Identity(n, n)).norm(),
                                (v.adjoint() * v - Matrix::Identity(n, n)).norm());
  if (unitary_res > std::sqrt(tol.bound(1.0)) * n)
    throw structure_error("classify_square_automorphism: recovered factors are not unitary "
                          "(residual " + std::to_string(unitary_res) + ")");

  SquareAutomorphismReport rep;
  if (branch == Branch::linear)
    rep.form = transposed ? 4 : 1;
  else
    rep.form = transposed ? 3 : 2;
  rep.U = uu;
  rep.V = v;

  // Validate the recovered form on seeded random elements.
  Rng rng(seed);
  for (int s = 0; s < 16; ++s) {
    Element x = random_element(f, rng);
    Matrix g;
    switch (rep.form) {
      case 1: g = x.matrix(); break;
      case 2: g = x.matrix().conjugate(); break;
      case 3: g = x.matrix().adjoint(); break;
      default: g = x.matrix().transpose(); break;
    }
    rep.residual = std::max(rep.residual, operator_norm(map.apply(x).matrix() - uu * g * v));
  }
  if (rep.residual > std::sqrt(tol.bound(1.0)))
    throw structure_error("classify_square_automorphism: map does not match any product form "
                          "(residual " + std::to_string(rep.residual) + ")");
  return rep;
}

// ---------------------------------------------------------------------------
// Rectangular reconstruction.

inline ReconstructionReport reconstruct_rectangular(const TripotentOracle& oracle,
                                                    const Tolerance& tol = {},
                                                    int n_samples = 300, std::uint64_t seed = 0) {
  const FactorDescriptor& domain = oracle.domain();
  if (domain.kind() != FactorKind::rect)
    throw precondition_error("reconstruct_rectangular: domain must be a rect factor");
  if (domain.rank() < 2)
    throw precondition_error("reconstruct_rectangular: domain must have rank >= 2");
  if (oracle.target().kind() != FactorKind::rect ||
      oracle.target().complex_dim() != domain.complex_dim())
    throw structure_error("reconstruct_rectangular: target is not a rect factor of matching "
                          "dimension (got " + oracle.target().describe() + ")");

  const int m = domain.rows(), n = domain.cols();
  RectGrid source = rectangular_grid(m, n);
  std::vector<Element> images;
  images.reserve(source.cells.size());
  for (auto& cell : source.cells) images.push_back(oracle(cell));

  RectGrid image_grid{oracle.target(), m, n, images};
  GridReport grid_rep = verify_rectangular_grid(image_grid, tol, seed);
  if (!grid_rep.ok) {
    const GridViolation& v = grid_rep.violations.front();
    std::string axiom = (v.axiom == "quadrangle") ? "(ii)"
                        : (v.axiom == "vanishing") ? "(iii)"
                                                   : "(i)";
    std::string idx;
    for (int k : v.indices) idx += (idx.empty() ? "" : ",") + std::to_string(k);
    throw structure_error("reconstruct_rectangular: image grid axiom " + axiom + " violated (" +
                          v.axiom + " at [" + idx + "], residual " + std::to_string(v.residual) +
                          ")");
  }

  Branch branch = detect_branch(oracle, source.cell(0, 0), tol);
  ReconstructionReport rep;
  rep.branch = branch;
  rep.map = grid_linear_extension(source, images, branch, tol);
  rep.sigma = {0};

  Rng rng(seed);
  std::uniform_int_distribution<int> pick(1, domain.rank());
  for (int s = 0; s < n_samples; ++s) {
    Element w = random_tripotent(domain, pick(rng), rng);
    rep.max_residual = std::max(rep.max_residual, norm(rep.map.apply(w) - oracle(w)));
  }
  rep.n_samples = n_samples;

  int form = 0;
  if (m == n) form = classify_square_automorphism(rep.map, tol, seed).form;
  rep.blocks = {BlockReport{0, 0, branch, rep.lambda0, rep.max_residual, form}};
  return rep;
}

// ---------------------------------------------------------------------------
// Atomic (direct sum) reconstruction.

namespace detail {

inline Element embed_component(const FactorDescriptor& sum_factor, size_t index,
                               const Element& w) {
  std::vector<Element> parts;
  const auto& comps = sum_factor.components();
  for (size_t i = 0; i < comps.size(); ++i)
    parts.push_back(i == index ? w : Element::zero(comps[i]));
  return Element(sum_factor, std::move(parts));
}

}  // namespace detail

inline ReconstructionReport reconstruct_atomic(const TripotentOracle& oracle,
                                               const Tolerance& tol = {}, int n_samples = 300,
                                               std::uint64_t seed = 0) {
  const FactorDescriptor& domain = oracle.domain();
  const FactorDescriptor& target = oracle.target();
  if (domain.kind() != FactorKind::sum || target.kind() != FactorKind::sum)
    throw precondition_error("reconstruct_atomic: domain and target must be direct sums");
  const auto& dcomps = domain.components();
  const auto& tcomps = target.components();
  if (dcomps.size() != tcomps.size())
    throw structure_error("reconstruct_atomic: domain and target have different component counts");
  for (auto& c : dcomps) {
    if (c.kind() != FactorKind::spin && c.kind() != FactorKind::rect)
      throw precondition_error("reconstruct_atomic: components must be spin or rect factors");
    if (c.rank() < 2)
      throw precondition_error("reconstruct_atomic: components must have rank >= 2");
  }

  // Recover the routing: the image of a tripotent supported in one component
  // is supported in exactly one target component.
  const size_t k = dcomps.size();
  std::vector<int> sigma(k, -1);
  std::vector<bool> taken(k, false);
  for (size_t i = 0; i < k; ++i) {
    Element probe = detail::embed_component(domain, i, basis(dcomps[i], 0));
    Element img = oracle(probe);
    int hit = -1;
    for (size_t t = 0; t < k; ++t) {
      if (norm(img.parts()[t]) > tol.bound(1.0)) {
        if (hit >= 0)
          throw structure_error("reconstruct_atomic: image of a component tripotent meets "
                                "several target components");
        hit = static_cast<int>(t);
      }
    }
    if (hit < 0)
      throw structure_error("reconstruct_atomic: image of a nonzero tripotent vanished");
    if (taken[static_cast<size_t>(hit)])
      throw structure_error("reconstruct_atomic: two components route to the same target");
    taken[static_cast<size_t>(hit)] = true;
    sigma[i] = hit;
  }

  // Blockwise reconstruction through per-component oracles. Every call checks
  // that the off-target components of the image stay zero.
  ReconstructionReport rep;
  rep.sigma = sigma;
  rep.map.domain = domain;
  rep.map.target = target;
  Rng seeder(seed);
  for (size_t i = 0; i < k; ++i) {
    const size_t t = static_cast<size_t>(sigma[i]);
    auto component_fn = [&oracle, &domain, i, t, tol](const Element& w) -> Element {
      Element img = oracle(detail::embed_component(domain, i, w));
      for (size_t s = 0; s < img.parts().size(); ++s)
        if (s != t && norm(img.parts()[s]) > tol.bound(1.0))
          throw structure_error("reconstruct_atomic: component image leaked outside its routed "
                                "target component");
      return img.parts()[t];
    };
    TripotentOracle comp_oracle(dcomps[i], tcomps[t], component_fn, oracle.provenance(), tol);
    std::uint64_t block_seed = seeder();
    ReconstructionReport block =
        dcomps[i].kind() == FactorKind::spin
            ? reconstruct_spin(comp_oracle, tol, n_samples, block_seed)
            : reconstruct_rectangular(comp_oracle, tol, n_samples, block_seed);
    BlockReport br = block.blocks.at(0);
    br.domain_index = static_cast<int>(i);
    br.target_index = sigma[i];
    rep.blocks.push_back(br);
    RealLinearMap::Block mb = block.map.blocks.at(0);
    mb.domain_index = static_cast<int>(i);
    mb.target_index = sigma[i];
    rep.map.blocks.push_back(std::move(mb));
    rep.max_residual = std::max(rep.max_residual, br.max_residual);
    rep.n_samples += block.n_samples;
  }
  rep.lambda0 = rep.blocks.front().lambda0;
  rep.branch = rep.blocks.front().branch;

  // End-to-end validation on whole-sum tripotents with mixed component ranks.
  Rng rng(seeder());
  const int extra = std::max(1, n_samples / 2);
  for (int s = 0; s < extra; ++s) {
    Element w = random_tripotent(domain, rng);
    rep.max_residual = std::max(rep.max_residual, norm(rep.map.apply(w) - oracle(w)));
  }
  rep.n_samples += extra;
  return rep;
}

// ---------------------------------------------------------------------------
// Extension verification.

struct ExtensionReport {
  double max_tripotent_residual = 0.0;  // |T(w) - oracle(w)| over sampled tripotents
  double max_triple_residual = 0.0;     // |T{x,y,z} - {Tx,Ty,Tz}| over random elements
  double max_isometry_residual = 0.0;   // | |Tx| - |x| | over random elements
  int n_samples = 0;
  bool ok = false;
};

inline ExtensionReport verify_extension(const RealLinearMap& map, const TripotentOracle& oracle,
                                        int n_samples = 300, std::uint64_t seed = 0,
                                        const Tolerance& tol = {}) {
  if (map.domain != oracle.domain() || map.target != oracle.target())
    throw shape_error("verify_extension: map and oracle disagree on domain/target");
  ExtensionReport rep;
  rep.n_samples = n_samples;
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    Element w = random_tripotent(map.domain, rng);
    rep.max_tripotent_residual =
        std::max(rep.max_tripotent_residual, norm(map.apply(w) - oracle(w)));
  }
  for (int s = 0; s < std::max(1, n_samples / 4); ++s) {
    Element x = random_element(map.domain, rng);
    Element y = random_element(map.domain, rng);
    Element z = random_element(map.domain, rng);
    Element lhs = map.apply(triple_product(x, y, z));
    Element rhs = triple_product(map.apply(x), map.apply(y), map.apply(z));
    double scale = norm(x) * norm(y) * norm(z);
    rep.max_triple_residual = std::max(rep.max_triple_residual, norm(lhs - rhs) / std::max(1.0, scale));
    rep.max_isometry_residual =
        std::max(rep.max_isometry_residual, std::abs(norm(map.apply(x)) - norm(x)) / std::max(1.0, norm(x)));
  }
  rep.ok = tol.pass(rep.max_tripotent_residual, 1.0) && tol.pass(rep.max_triple_residual, 1.0) &&
           tol.pass(rep.max_isometry_residual, 1.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Preservation checker for finite tripotent families.

struct PreservationViolation {
  std::string kind;  // "image", "zero", "order", "order-converse",
                     // "orthogonality", "orthogonality-converse", "additivity"
  int i = -1, j = -1;
  double residual = 0.0;
};

struct PreservationReport {
  bool ok = true;
  std::vector<PreservationViolation> violations;
  int pairs_checked = 0;
  int sums_checked = 0;
};

// Check that the oracle preserves the order and orthogonality structure of a
// finite family of tripotents, including the derived conclusions: orthogonality
// reflects backwards, the zero tripotent is fixed, and images are additive on
// orthogonal pairs whose sum lies in the family.
inline PreservationReport check_preservation(const std::vector<Element>& family,
                                             const TripotentOracle& oracle,
                                             const Tolerance& tol = {}) {
  PreservationReport rep;
  auto flag = [&](std::string kind, int i, int j, double r) {
    rep.ok = false;
    rep.violations.push_back(PreservationViolation{std::move(kind), i, j, r});
  };

  const int n = static_cast<int>(family.size());
  for (int i = 0; i < n; ++i) require_tripotent(family[static_cast<size_t>(i)], tol, "check_preservation");

  std::vector<Element> images;
  images.reserve(family.size());
  for (int i = 0; i < n; ++i) {
    try {
      images.push_back(oracle(family[static_cast<size_t>(i)]));
    } catch (const structure_error&) {
      flag("image", i, -1, tripotent_residual(family[static_cast<size_t>(i)]));
      return rep;  // cannot continue without images
    }
  }

  // The zero tripotent must map to zero.
  try {
    double z = norm(oracle(Element::zero(oracle.domain())));
    if (!tol.pass(z, 1.0)) flag("zero", -1, -1, z);
  } catch (const structure_error&) {
    // A table oracle may simply not cover zero; that is not a violation.
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Element& a = family[static_cast<size_t>(i)];
      const Element& b = family[static_cast<size_t>(j)];
      const Element& fa = images[static_cast<size_t>(i)];
      const Element& fb = images[static_cast<size_t>(j)];
      ++rep.pairs_checked;
      bool src_leq = leq(a, b, tol);
      bool img_leq = leq(fa, fb, tol);
      if (src_leq && !img_leq) flag("order", i, j, 0.0);
      if (!src_leq && img_leq) flag("order-converse", i, j, 0.0);
      if (i < j) {
        bool src_orth = is_orthogonal(a, b, tol);
        bool img_orth = is_orthogonal(fa, fb, tol);
        if (src_orth && !img_orth)
          flag("orthogonality", i, j,
               std::max(norm(triple_product(fa, fa, fb)), norm(triple_product(fb, fb, fa))));
        if (!src_orth && img_orth) flag("orthogonality-converse", i, j, 0.0);
        // Additivity on orthogonal pairs whose sum is present in the family.
        if (src_orth) {
          Element s = a + b;
          for (int k = 0; k < n; ++k) {
            if (norm(family[static_cast<size_t>(k)] - s) <= tol.bound(1.0)) {
              ++rep.sums_checked;
              double r = norm(fa + fb - images[static_cast<size_t>(k)]);
              if (!tol.pass(r, 1.0)) flag("additivity", i, j, r);
              break;
            }
          }
        }
      }
    }
  return rep;
}

}  // namespace triplekit
