#pragma once

// Involutive distributions of sections: annihilator coframes, deterministic
// frame completion, the bracket and Cartan involutivity criteria, ideal
// membership, and the exterior differential system consistency check.

#include <string>
#include <vector>

#include "gla/forms.hpp"

namespace gla {

struct IDS {
    AlgebroidPtr algebroid;
    std::vector<Section> generators;
    // Optional user-supplied completion to a full frame; when empty the
    // deterministic greedy completion is used.
    std::vector<Section> completion;
};

// Frame-basis printer: "T3", "x1*T2 + T3", "0".
inline std::string section_str(const Section& s) {
    std::string out;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const ScalarExpr& c = s.coeffs[i];
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (c.is_one()) {
            out += "T" + std::to_string(i + 1);
        } else {
            bool simple = c.den().is_constant() && c.num().terms().size() == 1 &&
                          c.num().leading().second > 0;
            out += (simple ? c.str() : "(" + c.str() + ")") + "*T" + std::to_string(i + 1);
        }
    }
    return out.empty() ? "0" : out;
}

// p x k matrix whose columns are the generator coefficient vectors.
inline FieldMatrix generator_matrix(const IDS& d) {
    const AlgebroidPtr& a = d.algebroid;
    FieldMatrix m = FieldMatrix::zero(a->rank(), d.generators.size(), a->base_ptr());
    for (std::size_t j = 0; j < d.generators.size(); ++j) {
        if (d.generators[j].coeffs.size() != a->rank())
            throw std::invalid_argument("generator rank mismatch");
        for (std::size_t i = 0; i < a->rank(); ++i) m.at(i, j) = d.generators[j].coeffs[i];
    }
    return m;
}

// Annihilator of the distribution in the dual: 1-forms eta with eta(u) = 0
// for every generator u; computed as the nullspace of the transposed
// generator matrix.
inline std::vector<Form> annihilator(const IDS& d) {
    FieldMatrix m = generator_matrix(d);
    std::vector<Form> etas;
    for (const auto& v : nullspace(m.transpose())) {
        Form eta(d.algebroid, 1);
        for (std::size_t i = 0; i < v.size(); ++i) eta.add_term({i}, v[i]);
        etas.push_back(std::move(eta));
    }
    return etas;
}

// A completed frame: the first `dist_rank` columns span the distribution,
// the rest are standard basis vectors appended greedily in index order.
// `coframe` holds the dual coframe (row a is Theta^a).
struct CartanWitness {
    FieldMatrix frame;    // p x p, invertible
    FieldMatrix coframe;  // frame^{-1}
    std::size_t dist_rank;

    Section frame_section(const AlgebroidPtr& a, std::size_t col) const {
        std::vector<ScalarExpr> c;
        for (std::size_t i = 0; i < frame.rows(); ++i) c.push_back(frame.at(i, col));
        return a->section(std::move(c));
    }

    Form coframe_form(const AlgebroidPtr& a, std::size_t row) const {
        Form th(a, 1);
        for (std::size_t j = 0; j < coframe.cols(); ++j) th.add_term({j}, coframe.at(row, j));
        return th;
    }
};

inline CartanWitness complete_frame(const IDS& d) {
    const AlgebroidPtr& a = d.algebroid;
    std::size_t p = a->rank();
    FieldMatrix m = generator_matrix(d);
    // Independent generator subset: pivot columns of the echelon form.
    std::vector<std::size_t> piv = detail::bareiss_echelon(m).pivot_cols;
    std::size_t r = piv.size();
    FieldMatrix frame = FieldMatrix::zero(p, p, a->base_ptr());
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < p; ++i) frame.at(i, j) = m.at(i, piv[j]);
    if (!d.completion.empty()) {
        if (d.completion.size() != p - r)
            throw std::invalid_argument("completion must supply rank - r sections");
        for (std::size_t j = 0; j < d.completion.size(); ++j)
            for (std::size_t i = 0; i < p; ++i)
                frame.at(i, r + j) = d.completion[j].coeffs.at(i);
        if (rank(frame) != p)
            throw std::invalid_argument("supplied completion does not complete the frame");
        return CartanWitness{frame, invert(frame), r};
    }
    // Complete with standard basis columns, keeping the rank growing.
    std::size_t col = r;
    ScalarExpr one = ScalarExpr::constant(a->base_ptr(), Rational(1));
    for (std::size_t e = 0; e < p && col < p; ++e) {
        FieldMatrix trial = FieldMatrix::zero(p, col + 1, a->base_ptr());
        for (std::size_t j = 0; j < col; ++j)
            for (std::size_t i = 0; i < p; ++i) trial.at(i, j) = frame.at(i, j);
        trial.at(e, col) = one;
        if (rank(trial) == col + 1) {
            frame.at(e, col) = one;
            ++col;
        }
    }
    if (col < p) throw std::logic_error("frame completion failed");
    return CartanWitness{frame, invert(frame), r};
}

struct InvolutivityReport {
    std::string method;  // "bracket" or "cartan"
    bool involutive;
    std::vector<std::string> witnesses;
};

// Bracket criterion: [u_i, u_j] lies in the pointwise span of the generators
// for every pair, decided by exact linear solving over the field.
inline InvolutivityReport involutive_bracket(const IDS& d) {
    InvolutivityReport rep{"bracket", true, {}};
    FieldMatrix m = generator_matrix(d);
    for (std::size_t i = 0; i < d.generators.size(); ++i)
        for (std::size_t j = i + 1; j < d.generators.size(); ++j) {
            Section br = d.algebroid->bracket(d.generators[i], d.generators[j]);
            if (!solve(m, br.coeffs)) {
                rep.involutive = false;
                rep.witnesses.push_back("[S" + std::to_string(i + 1) + ",S" +
                                        std::to_string(j + 1) + "] = " + section_str(br));
            }
        }
    return rep;
}

// Cartan criterion: with the completed frame e_1..e_p and dual coframe
// Theta^1..Theta^p, the distribution is involutive iff
// d Theta^al (e_a, e_b) = 0 for every annihilator index al > r and every
// distribution pair a,b <= r.
inline InvolutivityReport involutive_cartan(const IDS& d) {
    InvolutivityReport rep{"cartan", true, {}};
    const AlgebroidPtr& a = d.algebroid;
    CartanWitness w = complete_frame(d);
    std::size_t p = a->rank(), r = w.dist_rank;
    std::vector<Section> frames;
    for (std::size_t i = 0; i < p; ++i) frames.push_back(w.frame_section(a, i));
    for (std::size_t al = r; al < p; ++al) {
        Form dth = exterior_derivative(w.coframe_form(a, al));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) {
                ScalarExpr v = dth.evaluate({frames[i], frames[j]});
                if (!v.is_zero()) {
                    rep.involutive = false;
                    rep.witnesses.push_back("dTheta^" + std::to_string(al + 1) + "(e" +
                                            std::to_string(i + 1) + ",e" +
                                            std::to_string(j + 1) + ") = " + v.str());
                }
            }
    }
    return rep;
}

// Ideal membership in the sense of vanishing on the distribution: w is a
// member iff it evaluates to zero on every increasing generator tuple
// (multilinearity makes generator tuples sufficient).
inline bool ideal_membership(const Form& w, const IDS& d) {
    std::size_t q = w.degree(), k = d.generators.size();
    if (q == 0) return w.is_zero();
    if (q > k) return true;
    std::vector<std::size_t> idx(q);
    for (std::size_t i = 0; i < q; ++i) idx[i] = i;
    for (;;) {
        std::vector<Section> args;
        args.reserve(q);
        for (std::size_t i : idx) args.push_back(d.generators[i]);
        if (!w.evaluate(args).is_zero()) return false;
        std::size_t i = q;
        bool advanced = false;
        while (i-- > 0) {
            if (idx[i] + 1 <= k - (q - i)) {
                ++idx[i];
                for (std::size_t j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return true;
    }
}

struct EdsReport {
    bool involutive;
    bool consistent;  // dTheta^al = sum_g Omega^al_g ^ Theta^g
    std::vector<Form> omega;  // indexed [al - r][g - r]
    std::vector<std::string> witnesses;
};

// Exterior differential system route: expand dTheta^al in the completed
// coframe,
//   dTheta^al = 1/2 A^al_ab Th^a Th^b + B^al_bg Th^b Th^g + 1/2 C^al_bg Th^b Th^g,
// (a,b distribution indices, g annihilator indices). Involutive iff all A
// vanish; then with Omega^al_g = B^al_bg Th^b + 1/2 C^al_bg Th^b the system
// closes: dTheta^al = sum_g Omega^al_g ^ Theta^g.
inline EdsReport eds_check(const IDS& d) {
    const AlgebroidPtr& a = d.algebroid;
    CartanWitness w = complete_frame(d);
    std::size_t p = a->rank(), r = w.dist_rank;
    std::vector<Section> frames;
    std::vector<Form> thetas;
    for (std::size_t i = 0; i < p; ++i) {
        frames.push_back(w.frame_section(a, i));
        thetas.push_back(w.coframe_form(a, i));
    }
    EdsReport rep{true, true, {}, {}};
    ScalarExpr half = ScalarExpr::constant(a->base_ptr(), Rational(1, 2));
    std::vector<Form> dthetas;
    for (std::size_t al = r; al < p; ++al) {
        Form dth = exterior_derivative(thetas[al]);
        if (!ideal_membership(dth, d)) rep.involutive = false;
        // A part
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) {
                ScalarExpr v = dth.evaluate({frames[i], frames[j]});
                if (!v.is_zero()) {
                    rep.involutive = false;
                    rep.witnesses.push_back("A^" + std::to_string(al + 1) + "_{" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                            "} = " + v.str());
                }
            }
        dthetas.push_back(std::move(dth));
    }
    // The Omega closure identity only holds on involutive systems.
    rep.consistent = rep.involutive;
    for (std::size_t al = r; al < p; ++al) {
        const Form& dth = dthetas[al - r];
        // Omega^al_g from the B and C parts.
        for (std::size_t g = r; g < p; ++g) {
            Form om(a, 1);
            for (std::size_t b = 0; b < r; ++b) {
                ScalarExpr B = dth.evaluate({frames[b], frames[g]});
                if (!B.is_zero()) om += B * thetas[b];
            }
            for (std::size_t be = r; be < p; ++be) {
                ScalarExpr C = dth.evaluate({frames[be], frames[g]});
                if (!C.is_zero()) om += (half * C) * thetas[be];
            }
            rep.omega.push_back(std::move(om));
        }
        if (!rep.involutive) continue;
        // Consistency: dTheta^al - sum_g Omega^al_g ^ Theta^g.
        Form resid = dth;
        for (std::size_t g = r; g < p; ++g)
            resid -= wedge(rep.omega[(al - r) * (p - r) + (g - r)], thetas[g]);
        if (!resid.is_zero()) {
            rep.consistent = false;
            rep.witnesses.push_back("EDS residual in dTheta^" + std::to_string(al + 1));
        }
    }
    return rep;
}

}  // namespace gla
