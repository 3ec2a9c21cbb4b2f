#pragma once

// Generalized Lie algebroid data model over a single coordinate patch:
// the anchor matrix and antisymmetric structure functions, the Leibniz
// bracket of sections, axiom validation, pull-back construction, frame
// changes and the tangent-frame constructor.

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gla/linalg.hpp"

namespace gla {

// A smooth map between coordinate patches: one component expression per
// target coordinate, over the source coordinates.
struct SmoothMap {
    std::shared_ptr<const CoordinateSet> source;
    std::shared_ptr<const CoordinateSet> target;
    std::vector<ScalarExpr> components;  // over source

    SmoothMap(std::shared_ptr<const CoordinateSet> src,
              std::shared_ptr<const CoordinateSet> tgt,
              std::vector<ScalarExpr> comps)
        : source(std::move(src)), target(std::move(tgt)), components(std::move(comps)) {
        if (components.size() != target->size())
            throw std::invalid_argument("smooth map component count mismatch");
        for (const ScalarExpr& c : components)
            if (c.coords() != *source)
                throw std::invalid_argument("smooth map component over wrong coordinates");
    }

    static SmoothMap identity(std::shared_ptr<const CoordinateSet> coords) {
        std::vector<ScalarExpr> comps;
        for (const std::string& n : coords->names())
            comps.push_back(ScalarExpr::coordinate(coords, n));
        return SmoothMap(coords, coords, std::move(comps));
    }

    // Bindings substituting each target coordinate by its component.
    std::map<std::string, ScalarExpr> bindings() const {
        std::map<std::string, ScalarExpr> b;
        for (std::size_t i = 0; i < target->size(); ++i)
            b.emplace(target->name(i), components[i]);
        return b;
    }
};

class Algebroid;
using AlgebroidPtr = std::shared_ptr<const Algebroid>;

struct Section {
    AlgebroidPtr algebroid;
    std::vector<ScalarExpr> coeffs;  // z^alpha over the base coordinates
};

struct ValidationEntry {
    std::string name;
    bool passed;
    std::string witness;  // failing expression, empty on pass
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    std::vector<std::string> notes;

    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return true;
    }
};

// How the coordinate patch is to be read; affects only report labels
// (structure equations C2 vs C2').
enum class Presentation { BaseN, Pullback };

class Algebroid : public std::enable_shared_from_this<Algebroid> {
public:
    // `structure` is the full three-index table structure[gamma][alpha][beta];
    // use `make` to build from alpha<beta entries with antisymmetry enforced.
    Algebroid(std::shared_ptr<const CoordinateSet> base, std::size_t rank,
              FieldMatrix anchor, std::vector<std::vector<std::vector<ScalarExpr>>> structure,
              Presentation presentation = Presentation::Pullback)
        : base_(std::move(base)),
          rank_(rank),
          anchor_(std::move(anchor)),
          structure_(std::move(structure)),
          presentation_(presentation) {
        if (anchor_.rows() != base_->size() || anchor_.cols() != rank_)
            throw std::invalid_argument("anchor matrix shape mismatch");
        if (structure_.size() != rank_)
            throw std::invalid_argument("structure table shape mismatch");
        for (const auto& plane : structure_) {
            if (plane.size() != rank_) throw std::invalid_argument("structure table shape mismatch");
            for (const auto& row : plane)
                if (row.size() != rank_)
                    throw std::invalid_argument("structure table shape mismatch");
        }
    }

    struct StructureEntry {
        std::size_t gamma, alpha, beta;  // 0-based, alpha < beta
        ScalarExpr value;
    };

    // Build with the antisymmetric completion of alpha<beta entries.
    static AlgebroidPtr make(std::shared_ptr<const CoordinateSet> base, std::size_t rank,
                             FieldMatrix anchor, const std::vector<StructureEntry>& entries,
                             Presentation presentation = Presentation::Pullback) {
        ScalarExpr zero = ScalarExpr::constant(base, Rational(0));
        std::vector table(rank, std::vector(rank, std::vector<ScalarExpr>(rank, zero)));
        for (const auto& e : entries) {
            if (e.gamma >= rank || e.alpha >= rank || e.beta >= rank)
                throw std::invalid_argument("structure entry index out of range");
            if (e.alpha >= e.beta)
                throw std::invalid_argument("structure entries must have alpha < beta");
            table[e.gamma][e.alpha][e.beta] = e.value;
            table[e.gamma][e.beta][e.alpha] = -e.value;
        }
        return std::make_shared<Algebroid>(std::move(base), rank, std::move(anchor),
                                           std::move(table), presentation);
    }

    const CoordinateSet& base() const { return *base_; }
    std::shared_ptr<const CoordinateSet> base_ptr() const { return base_; }
    std::size_t dim() const { return base_->size(); }
    std::size_t rank() const { return rank_; }
    const FieldMatrix& anchor() const { return anchor_; }
    Presentation presentation() const { return presentation_; }

    const ScalarExpr& structure(std::size_t gamma, std::size_t alpha, std::size_t beta) const {
        return structure_.at(gamma).at(alpha).at(beta);
    }

    ScalarExpr zero_scalar() const { return ScalarExpr::constant(base_, Rational(0)); }

    Section zero_section() const {
        return Section{shared_from_this(), std::vector<ScalarExpr>(rank_, zero_scalar())};
    }

    Section frame_section(std::size_t alpha) const {
        Section s = zero_section();
        s.coeffs.at(alpha) = ScalarExpr::constant(base_, Rational(1));
        return s;
    }

    Section section(std::vector<ScalarExpr> coeffs) const {
        if (coeffs.size() != rank_) throw std::invalid_argument("section coefficient count");
        return Section{shared_from_this(), std::move(coeffs)};
    }

    // The anchor as a derivation: sum over alpha, i of
    // u^alpha anchor[i][alpha] df/dx_i.
    ScalarExpr anchor_apply(const Section& u, const ScalarExpr& f) const {
        ScalarExpr acc = zero_scalar();
        std::vector<ScalarExpr> partials;
        partials.reserve(dim());
        for (std::size_t i = 0; i < dim(); ++i) partials.push_back(f.partial(i));
        for (std::size_t a = 0; a < rank_; ++a) {
            if (u.coeffs[a].is_zero()) continue;
            for (std::size_t i = 0; i < dim(); ++i) {
                if (anchor_.at(i, a).is_zero() || partials[i].is_zero()) continue;
                acc += u.coeffs[a] * anchor_.at(i, a) * partials[i];
            }
        }
        return acc;
    }

    // Leibniz bracket: [u,v]^g = u^a v^b L^g_ab + rho(u)(v^g) - rho(v)(u^g).
    Section bracket(const Section& u, const Section& v) const {
        Section r = zero_section();
        for (std::size_t g = 0; g < rank_; ++g) {
            ScalarExpr acc = zero_scalar();
            for (std::size_t a = 0; a < rank_; ++a) {
                if (u.coeffs[a].is_zero()) continue;
                for (std::size_t b = 0; b < rank_; ++b) {
                    const ScalarExpr& L = structure_[g][a][b];
                    if (v.coeffs[b].is_zero() || L.is_zero()) continue;
                    acc += u.coeffs[a] * v.coeffs[b] * L;
                }
            }
            acc += anchor_apply(u, v.coeffs[g]);
            acc -= anchor_apply(v, u.coeffs[g]);
            r.coeffs[g] = acc;
        }
        return r;
    }

    // Axiom report: antisymmetry of L, Jacobi on frame triples, and the
    // anchor-compatibility identity
    //   L^g_ab rho^k_g = rho^i_a d(rho^k_b) - rho^j_b d(rho^k_a).
    ValidationReport validate() const {
        ValidationReport rep;
        // (a) antisymmetry
        {
            bool ok = true;
            std::string witness;
            for (std::size_t g = 0; g < rank_ && ok; ++g)
                for (std::size_t a = 0; a < rank_ && ok; ++a)
                    for (std::size_t b = a; b < rank_ && ok; ++b) {
                        ScalarExpr res = structure_[g][a][b] + structure_[g][b][a];
                        if (!res.is_zero()) {
                            ok = false;
                            witness = "L[" + idx(g, a, b) + "] + L[" + idx(g, b, a) +
                                      "] = " + res.str();
                        }
                    }
            rep.entries.push_back({"antisymmetry", ok, witness});
        }
        // (b) Jacobi on frame triples
        {
            bool ok = true;
            std::string witness;
            for (std::size_t a = 0; a < rank_ && ok; ++a)
                for (std::size_t b = 0; b < rank_ && ok; ++b)
                    for (std::size_t c = 0; c < rank_ && ok; ++c) {
                        Section ta = frame_section(a), tb = frame_section(b),
                                tc = frame_section(c);
                        Section sum = bracket(ta, bracket(tb, tc));
                        Section s2 = bracket(tb, bracket(tc, ta));
                        Section s3 = bracket(tc, bracket(ta, tb));
                        for (std::size_t g = 0; g < rank_; ++g) {
                            ScalarExpr res = sum.coeffs[g] + s2.coeffs[g] + s3.coeffs[g];
                            if (!res.is_zero()) {
                                ok = false;
                                witness = "cyclic[t" + std::to_string(a + 1) + ",t" +
                                          std::to_string(b + 1) + ",t" + std::to_string(c + 1) +
                                          "]^" + std::to_string(g + 1) + " = " + res.str();
                                break;
                            }
                        }
                    }
            rep.entries.push_back({"jacobi", ok, witness});
        }
        // (c) anchor compatibility
        {
            bool ok = true;
            std::string witness;
            for (std::size_t a = 0; a < rank_ && ok; ++a)
                for (std::size_t b = 0; b < rank_ && ok; ++b)
                    for (std::size_t k = 0; k < dim() && ok; ++k) {
                        ScalarExpr lhs = zero_scalar();
                        for (std::size_t g = 0; g < rank_; ++g)
                            if (!structure_[g][a][b].is_zero())
                                lhs += structure_[g][a][b] * anchor_.at(k, g);
                        ScalarExpr rhs = zero_scalar();
                        for (std::size_t i = 0; i < dim(); ++i) {
                            if (!anchor_.at(i, a).is_zero())
                                rhs += anchor_.at(i, a) * anchor_.at(k, b).partial(i);
                            if (!anchor_.at(i, b).is_zero())
                                rhs -= anchor_.at(i, b) * anchor_.at(k, a).partial(i);
                        }
                        ScalarExpr res = lhs - rhs;
                        if (!res.is_zero()) {
                            ok = false;
                            witness = "(3.8)[" + idx(k, a, b) + "] residual = " + res.str();
                        }
                    }
            rep.entries.push_back({"anchor_compatibility", ok, witness});
        }
        rep.notes.push_back("rank statements hold generically over the function field; "
                            "loci where ranks drop are outside the model");
        rep.notes.push_back("surjectivity of the base map is asserted, not checked");
        return rep;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << "algebroid: dim=" << dim() << " rank=" << rank_ << "\n";
        return out.str();
    }

private:
    static std::string idx(std::size_t a, std::size_t b, std::size_t c) {
        return std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(c + 1);
    }

    std::shared_ptr<const CoordinateSet> base_;
    std::size_t rank_;
    FieldMatrix anchor_;
    std::vector<std::vector<std::vector<ScalarExpr>>> structure_;
    Presentation presentation_;
};

// Morphism of algebroids: fiber matrix (target-rank x source-rank, over the
// source coordinates) plus base map and its user-supplied inverse.
struct Morphism {
    AlgebroidPtr source;
    AlgebroidPtr target;
    FieldMatrix matrix;   // p' x p over source coordinates
    SmoothMap base_map;   // source base -> target base
    SmoothMap base_inverse;

    Morphism(AlgebroidPtr src, AlgebroidPtr tgt, FieldMatrix mat, SmoothMap fwd, SmoothMap inv)
        : source(std::move(src)),
          target(std::move(tgt)),
          matrix(std::move(mat)),
          base_map(std::move(fwd)),
          base_inverse(std::move(inv)) {
        if (matrix.rows() != target->rank() || matrix.cols() != source->rank())
            throw std::invalid_argument("morphism matrix shape mismatch");
        // base_map composed with its declared inverse must be the identity.
        auto inv_bindings = base_inverse.bindings();
        for (std::size_t i = 0; i < base_map.target->size(); ++i) {
            ScalarExpr roundtrip = base_map.components[i].substitute(inv_bindings);
            ScalarExpr coord = ScalarExpr::coordinate(base_map.target, base_map.target->name(i));
            if (roundtrip != coord)
                throw std::invalid_argument("declared base-map inverse is not an inverse");
        }
    }

    static Morphism identity(const AlgebroidPtr& a) {
        SmoothMap id = SmoothMap::identity(a->base_ptr());
        return Morphism(a, a, FieldMatrix::identity(a->rank(), a->base_ptr()), id, id);
    }
};

// Push a section through a morphism: phi(u) with coordinates moved by the
// inverse base map.
inline Section push_section(const Morphism& m, const Section& u) {
    std::vector<ScalarExpr> moved = m.matrix.apply(u.coeffs);
    auto inv = m.base_inverse.bindings();
    for (ScalarExpr& c : moved) c = c.substitute(inv);
    return m.target->section(std::move(moved));
}

// Pull-back Lie algebroid: substitute the base map into anchor and structure
// functions. `anchor_on_target` is the anchor written over the target (N)
// coordinates, with one row per source (M) coordinate.
inline AlgebroidPtr pullback_algebroid(const AlgebroidPtr& a_on_n, const SmoothMap& h,
                                       const FieldMatrix& anchor_on_n) {
    if (*h.target != a_on_n->base())
        throw std::invalid_argument("pull-back base map target mismatch");
    if (anchor_on_n.cols() != a_on_n->rank())
        throw std::invalid_argument("pull-back anchor shape mismatch");
    auto bindings = h.bindings();
    std::size_t p = a_on_n->rank();
    FieldMatrix anchor = FieldMatrix::zero(anchor_on_n.rows(), p, h.source);
    for (std::size_t i = 0; i < anchor_on_n.rows(); ++i)
        for (std::size_t al = 0; al < p; ++al)
            anchor.at(i, al) = anchor_on_n.at(i, al).substitute(bindings);
    ScalarExpr zero = ScalarExpr::constant(h.source, Rational(0));
    std::vector table(p, std::vector(p, std::vector<ScalarExpr>(p, zero)));
    for (std::size_t g = 0; g < p; ++g)
        for (std::size_t al = 0; al < p; ++al)
            for (std::size_t be = 0; be < p; ++be)
                table[g][al][be] = a_on_n->structure(g, al, be).substitute(bindings);
    return std::make_shared<Algebroid>(h.source, p, std::move(anchor), std::move(table),
                                       Presentation::Pullback);
}

// Convenience overload: base dimensions agree and the N-anchor is the stored
// one.
inline AlgebroidPtr pullback_algebroid(const AlgebroidPtr& a_on_n, const SmoothMap& h) {
    return pullback_algebroid(a_on_n, h, a_on_n->anchor());
}

// Section lift along the pull-back: coefficients composed with h.
inline Section lift_section(const AlgebroidPtr& pulled_back, const SmoothMap& h,
                            const Section& z) {
    auto bindings = h.bindings();
    std::vector<ScalarExpr> coeffs;
    coeffs.reserve(z.coeffs.size());
    for (const ScalarExpr& c : z.coeffs) coeffs.push_back(c.substitute(bindings));
    return pulled_back->section(std::move(coeffs));
}

inline std::vector<std::vector<std::vector<ScalarExpr>>> copy_structure(const Algebroid& a) {
    std::size_t p = a.rank();
    std::vector table(p, std::vector(p, std::vector<ScalarExpr>(p, a.zero_scalar())));
    for (std::size_t g = 0; g < p; ++g)
        for (std::size_t al = 0; al < p; ++al)
            for (std::size_t be = 0; be < p; ++be) table[g][al][be] = a.structure(g, al, be);
    return table;
}

// The generalized Lie algebroid associated to a Lie algebroid and a base map
// h: N -> N: both anchor and structure functions composed with h.
inline AlgebroidPtr gla_from_lie_algebroid(const AlgebroidPtr& a, const SmoothMap& h) {
    if (*h.source != a->base() || *h.target != a->base())
        throw std::invalid_argument("deformation map must act on the algebroid base");
    AlgebroidPtr r = pullback_algebroid(a, h);
    return std::make_shared<Algebroid>(r->base_ptr(), r->rank(), r->anchor(),
                                       copy_structure(*r), Presentation::BaseN);
}

// Tangent-frame constructor: anchor = theta, structure functions
//   L^g_ab = (theta^i_a d_i theta^j_b - theta^i_b d_i theta^j_a) thetatilde^g_j.
inline AlgebroidPtr tangent_gla(const FieldMatrix& theta, const FieldMatrix& theta_tilde,
                                std::shared_ptr<const CoordinateSet> coords,
                                Presentation presentation = Presentation::Pullback) {
    std::size_t m = theta.rows();
    if (theta.cols() != m || theta_tilde.rows() != m || theta_tilde.cols() != m)
        throw std::invalid_argument("tangent frame matrices must be square");
    if (!(theta * theta_tilde == FieldMatrix::identity(m, coords)))
        throw std::invalid_argument("frame matrices are not mutually inverse");
    ScalarExpr zero = ScalarExpr::constant(coords, Rational(0));
    std::vector table(m, std::vector(m, std::vector<ScalarExpr>(m, zero)));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            // commutator vector field components c^j
            std::vector<ScalarExpr> comm(m, zero);
            for (std::size_t j = 0; j < m; ++j) {
                ScalarExpr acc = zero;
                for (std::size_t i = 0; i < m; ++i) {
                    if (!theta.at(i, a).is_zero())
                        acc += theta.at(i, a) * theta.at(j, b).partial(i);
                    if (!theta.at(i, b).is_zero())
                        acc -= theta.at(i, b) * theta.at(j, a).partial(i);
                }
                comm[j] = acc;
            }
            for (std::size_t g = 0; g < m; ++g) {
                ScalarExpr acc = zero;
                for (std::size_t j = 0; j < m; ++j)
                    if (!comm[j].is_zero()) acc += comm[j] * theta_tilde.at(g, j);
                table[g][a][b] = acc;
                table[g][b][a] = -acc;
            }
        }
    return std::make_shared<Algebroid>(std::move(coords), m, theta, std::move(table),
                                       presentation);
}

// Frame change t'_a = Lambda^b_a t_b: anchor becomes anchor*Lambda and the
// structure functions are recomputed constructively from brackets of the new
// frame sections.
inline AlgebroidPtr change_frame(const AlgebroidPtr& a, const FieldMatrix& lambda) {
    std::size_t p = a->rank();
    if (lambda.rows() != p || lambda.cols() != p)
        throw std::invalid_argument("frame-change matrix must be p x p");
    FieldMatrix lambda_inv = invert(lambda);  // throws when singular
    FieldMatrix new_anchor = a->anchor() * lambda;
    ScalarExpr zero = a->zero_scalar();
    std::vector table(p, std::vector(p, std::vector<ScalarExpr>(p, zero)));
    for (std::size_t al = 0; al < p; ++al)
        for (std::size_t be = al + 1; be < p; ++be) {
            std::vector<ScalarExpr> ua, ub;
            for (std::size_t r = 0; r < p; ++r) {
                ua.push_back(lambda.at(r, al));
                ub.push_back(lambda.at(r, be));
            }
            Section br = a->bracket(a->section(ua), a->section(ub));
            std::vector<ScalarExpr> in_new = lambda_inv.apply(br.coeffs);
            for (std::size_t g = 0; g < p; ++g) {
                table[g][al][be] = in_new[g];
                table[g][be][al] = -in_new[g];
            }
        }
    return std::make_shared<Algebroid>(a->base_ptr(), p, std::move(new_anchor),
                                       std::move(table), a->presentation());
}

}  // namespace gla
