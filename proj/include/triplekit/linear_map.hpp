#pragma once

// Real-linear maps between factors, represented blockwise on canonical
// coordinates. A block is either complex-linear (w = L v) or conjugate-linear
// (w = L conj(v)). Plain factors have a single block; direct sums carry one
// block per domain component together with a routing of components, so a sum
// map may mix branches across blocks.

#include <vector>

#include "triplekit/factor.hpp"

namespace triplekit {

enum class Branch { linear, antilinear };

inline const char* to_string(Branch b) {
  return b == Branch::linear ? "linear" : "antilinear";
}

struct RealLinearMap {
  struct Block {
    int domain_index = 0;  // domain component this block consumes
    int target_index = 0;  // target component it produces
    Branch branch = Branch::linear;
    Matrix L;  // (target component dim) x (domain component dim)
  };

  FactorDescriptor domain = FactorDescriptor::spin(3);
  FactorDescriptor target = FactorDescriptor::spin(3);
  std::vector<Block> blocks;

  // Branch of a single-block map (the common case).
  Branch branch() const {
    if (blocks.size() != 1)
      throw precondition_error("RealLinearMap::branch: map has " +
                               std::to_string(blocks.size()) + " blocks");
    return blocks[0].branch;
  }

  static RealLinearMap single(FactorDescriptor domain, FactorDescriptor target, Branch branch,
                              Matrix L) {
    if (L.rows() != target.complex_dim() || L.cols() != domain.complex_dim())
      throw shape_error("RealLinearMap: matrix is " + std::to_string(L.rows()) + "x" +
                        std::to_string(L.cols()) + ", expected " +
                        std::to_string(target.complex_dim()) + "x" +
                        std::to_string(domain.complex_dim()));
    RealLinearMap m;
    m.domain = std::move(domain);
    m.target = std::move(target);
    m.blocks.push_back(Block{0, 0, branch, std::move(L)});
    return m;
  }

  // Capture an arbitrary (linear or conjugate-linear) function as a map by
  // evaluating it on the canonical basis. The canonical basis has real
  // coordinates, so the same column construction serves both branches.
  template <typename F>
  static RealLinearMap from_function(const FactorDescriptor& domain,
                                     const FactorDescriptor& target, Branch branch, F&& f) {
    Matrix L(target.complex_dim(), domain.complex_dim());
    for (int k = 0; k < domain.complex_dim(); ++k) L.col(k) = vec(f(basis(domain, k)));
    return single(domain, target, branch, std::move(L));
  }

  Element apply(const Element& x) const {
    if (x.factor() != domain)
      throw shape_error("RealLinearMap::apply: element lives in " + x.factor().describe() +
                        ", map domain is " + domain.describe());
    auto apply_block = [](const Block& b, const Element& in, const FactorDescriptor& out_f) {
      Vector v = vec(in);
      Vector w = (b.branch == Branch::linear) ? Vector(b.L * v) : Vector(b.L * v.conjugate());
      return unvec(out_f, w);
    };
    if (domain.kind() != FactorKind::sum) {
      if (blocks.size() != 1) throw shape_error("RealLinearMap::apply: malformed block list");
      return apply_block(blocks[0], x, target);
    }
    const auto& target_comps = target.components();
    std::vector<Element> out;
    out.reserve(target_comps.size());
    for (auto& c : target_comps) out.push_back(Element::zero(c));
    for (auto& b : blocks) {
      const Element& in = x.parts().at(static_cast<size_t>(b.domain_index));
      out.at(static_cast<size_t>(b.target_index)) =
          apply_block(b, in, target_comps.at(static_cast<size_t>(b.target_index)));
    }
    return Element(target, std::move(out));
  }
};

}  // namespace triplekit
