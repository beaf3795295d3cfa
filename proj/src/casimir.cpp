#include "wak/casimir.hpp"

#include <algorithm>

#include "wak/errors.hpp"

namespace wak {

namespace {

Family to_slot(Family f, Slot s) {
    const bool p = s == Slot::Primed;
    switch (f) {
        case Family::X: return p ? Family::XP : Family::XPP;
        case Family::Y: return p ? Family::YP : Family::YPP;
        case Family::T: return p ? Family::TP : Family::TPP;
        default: return f;
    }
}

/// Slot of a tensor family, or nullopt for families shared by both slots.
std::optional<std::pair<Slot, Family>> from_slot(Family f) {
    switch (f) {
        case Family::XP: return std::pair{Slot::Primed, Family::X};
        case Family::YP: return std::pair{Slot::Primed, Family::Y};
        case Family::TP: return std::pair{Slot::Primed, Family::T};
        case Family::XPP: return std::pair{Slot::DoublePrimed, Family::X};
        case Family::YPP: return std::pair{Slot::DoublePrimed, Family::Y};
        case Family::TPP: return std::pair{Slot::DoublePrimed, Family::T};
        default: return std::nullopt;
    }
}

Slot other(Slot s) { return s == Slot::Primed ? Slot::DoublePrimed : Slot::Primed; }

int slot_index(Slot s) { return s == Slot::Primed ? 0 : 1; }

Monomial tensor_monomial(const Monomial& a, const Monomial& b, TensorLayout layout) {
    Monomial::Vars vars;
    std::vector<VarPower> shared;
    for (const auto& vp : a.vars()) {
        VarId id = vp.id();
        if (id.family == Family::PARAM) {
            shared.push_back(vp);
            continue;
        }
        vars.push_back({var(to_slot(id.family, Slot::Primed), id.index).code(), vp.exp});
    }
    for (const auto& vp : b.vars()) {
        VarId id = vp.id();
        if (id.family == Family::PARAM) {
            shared.push_back(vp);
            continue;
        }
        vars.push_back({var(to_slot(id.family, Slot::DoublePrimed), id.index).code(), vp.exp});
    }
    std::array<int, 2> charges{0, 0};
    if (layout.slot_arity == 1) charges = {a.charge(0), b.charge(0)};
    Monomial m = Monomial::from_sorted(std::move(vars), layout.tensor_arity(), charges);
    for (const auto& vp : shared) m.multiply_var(vp.id(), vp.exp);
    return m;
}

}  // namespace

SparsePoly tensor_product(const SparsePoly& a, const SparsePoly& b, TensorLayout layout) {
    PolyBuilder pb(layout.tensor_arity());
    for (const auto& ta : a)
        for (const auto& tb : b) pb.add(tensor_monomial(ta.mono, tb.mono, layout), ta.coeff * tb.coeff);
    return pb.build();
}

std::vector<std::pair<SparsePoly, SparsePoly>> split_tensor(const SparsePoly& w, Slot major, TensorLayout layout) {
    std::map<Monomial, PolyBuilder> groups;
    const int sa = layout.slot_arity;
    for (const auto& t : w) {
        Monomial u(sa), rest(sa);
        for (const auto& vp : t.mono.vars()) {
            VarId id = vp.id();
            auto slot = from_slot(id.family);
            if (!slot) {
                u.multiply_var(id, vp.exp);
                continue;
            }
            (slot->first == major ? u : rest).multiply_var(var(slot->second, id.index), vp.exp);
        }
        if (sa == 1) {
            u.set_charge(0, t.mono.charge(slot_index(major)));
            rest.set_charge(0, t.mono.charge(slot_index(other(major))));
        }
        groups.try_emplace(u, sa).first->second.add(std::move(rest), t.coeff);
    }
    std::vector<std::pair<SparsePoly, SparsePoly>> out;
    out.reserve(groups.size());
    for (auto& [u, pb] : groups) out.emplace_back(SparsePoly::from_monomial(u), pb.build());
    return out;
}

std::vector<SparsePoly> lift_family(const SlotFamily& op, int count, Slot s, const SparsePoly& w,
                                    TensorLayout layout) {
    std::vector<PolyBuilder> acc(count, PolyBuilder(layout.tensor_arity()));
    for (const auto& [u, p] : split_tensor(w, other(s), layout)) {
        auto imgs = op(p);
        for (int i = 0; i < count; ++i) {
            if (imgs[i].is_zero()) continue;
            acc[i].add(s == Slot::Primed ? tensor_product(imgs[i], u, layout) : tensor_product(u, imgs[i], layout));
        }
    }
    std::vector<SparsePoly> out;
    out.reserve(count);
    for (auto& b : acc) out.push_back(b.build());
    return out;
}

std::vector<SparsePoly> tensor_basis_vectors(const CampaignOptions& opt) {
    std::vector<SparsePoly> out;
    for (int total = 0; total <= opt.max_weight; ++total)
        for (int w1 = 0; w1 <= total; ++w1) {
            auto b1 = graded_basis(w1, opt.charge_lo, opt.charge_hi, opt.cap);
            auto b2 = graded_basis(total - w1, opt.charge_lo, opt.charge_hi, opt.cap);
            for (const auto& m1 : b1)
                for (const auto& m2 : b2)
                    out.push_back(SparsePoly::from_monomial(tensor_monomial(m1, m2, kUntwistedLayout)));
        }
    return out;
}

SparsePoly Casimir::lift_mode(AffineGen g, int n, Slot s, const SparsePoly& w) const {
    SlotFamily op = [&](const SparsePoly& v) { return wak_.field_modes(g, n, n, v); };
    return std::move(lift_family(op, 1, s, w).front());
}

SparsePoly Casimir::lift_mode(HeisGen g, int n, Slot s, const SparsePoly& w) const {
    SlotFamily op = [&](const SparsePoly& v) { return std::vector<SparsePoly>{wak_.fock().heis_mode(g, n, v)}; };
    return std::move(lift_family(op, 1, s, w).front());
}

SparsePoly Casimir::lift_virasoro(int n, Slot s, const SparsePoly& w) const {
    SlotFamily op = [&](const SparsePoly& v) { return std::vector<SparsePoly>{wak_.virasoro_mode(n, v)}; };
    return std::move(lift_family(op, 1, s, w).front());
}

SparsePoly Casimir::diag_mode(AffineGen g, int n, const SparsePoly& w) const {
    return std::move(diag_modes(g, n, n, w).front());
}

std::vector<SparsePoly> Casimir::diag_modes(AffineGen g, int lo, int hi, const SparsePoly& w) const {
    const int count = hi - lo + 1;
    SlotFamily op = [&](const SparsePoly& v) { return wak_.field_modes(g, lo, hi, v); };
    auto a = lift_family(op, count, Slot::Primed, w);
    auto b = lift_family(op, count, Slot::DoublePrimed, w);
    for (int i = 0; i < count; ++i) a[i] += b[i];
    return a;
}

SparsePoly Casimir::casimir_mode(int n, const SparsePoly& w, const LevelScalar& hh_coeff) const {
    return std::move(casimir_modes(n, n, w, hh_coeff).front());
}

std::vector<SparsePoly> Casimir::casimir_modes(int lo, int hi, const SparsePoly& w,
                                               const LevelScalar& hh_coeff) const {
    const int count = hi - lo + 1;
    std::vector<PolyBuilder> acc(count, PolyBuilder(2));
    const LevelScalar mk = -wak_.level().k();
    const std::array<std::tuple<AffineGen, AffineGen, LevelScalar>, 3> blocks = {
        std::tuple{AffineGen::E, AffineGen::F, LevelScalar(1)},
        std::tuple{AffineGen::F, AffineGen::E, LevelScalar(1)},
        std::tuple{AffineGen::H, AffineGen::H, hh_coeff},
    };
    for (const auto& [u, p] : split_tensor(w, Slot::Primed)) {
        const int w1 = u.max_weight();
        const int w2 = p.max_weight();
        // a_(j) u ⊗ b_(n−1−j) p vanishes unless j ≤ w1 and n−1−j ≤ w2.
        const int jlo = lo - 1 - w2, jhi = w1;
        const int plo = lo - 1 - jhi, phi = std::min(w2, hi - 1 - jlo);
        if (jlo <= jhi && plo <= phi) {
            for (const auto& [a, b, coeff] : blocks) {
                if (coeff.is_zero()) continue;
                auto A = wak_.field_modes(a, jlo, jhi, u);
                auto B = wak_.field_modes(b, plo, phi, p);
                for (int n = lo; n <= hi; ++n) {
                    for (int j = std::max(jlo, n - 1 - phi); j <= std::min(jhi, n - 1 - plo); ++j) {
                        const SparsePoly& x = A[j - jlo];
                        const SparsePoly& y = B[n - 1 - j - plo];
                        if (x.is_zero() || y.is_zero()) continue;
                        acc[n - lo].add(tensor_product(x, y), coeff);
                    }
                }
            }
        }
        for (int n = lo; n <= hi; ++n) {
            acc[n - lo].add(tensor_product(u, wak_.virasoro_mode(n - 1, p)), mk);
            acc[n - lo].add(tensor_product(wak_.virasoro_mode(n - 1, u), p), mk);
        }
    }
    std::vector<SparsePoly> out;
    out.reserve(count);
    for (auto& b : acc) out.push_back(b.build());
    return out;
}

namespace {

/// The slot-symmetric Heisenberg action on a tensor polynomial.
SparsePoly tensor_heis(const FockSpace& fock, const HeisVec& a, int n, Slot s, const SparsePoly& w) {
    SlotFamily op = [&](const SparsePoly& v) { return std::vector<SparsePoly>{fock.heis_apply(a, n, v)}; };
    return std::move(lift_family(op, 1, s, w).front());
}

}  // namespace

SparsePoly Casimir::ef_residue_closed(const SparsePoly& w) const {
    if (w.is_zero()) return SparsePoly(2);
    int W = 0;
    for (const auto& t : w) W = std::max(W, t.mono.weight());
    const FockSpace& fock = wak_.fock();

    // A_m = S_m(D)w with j·D_j = ∂y′_j − ∂x′_j − ∂y″_j + ∂x″_j.
    std::vector<SparsePoly> A{w};
    for (int m = 1; m <= W; ++m) {
        PolyBuilder pb(2);
        for (int j = 1; j <= m; ++j) {
            const SparsePoly& prev = A[m - j];
            SparsePoly d = prev.derive(var(Family::YP, j)) - prev.derive(var(Family::XP, j)) -
                prev.derive(var(Family::YPP, j)) + prev.derive(var(Family::XPP, j));
            pb.add(d, BigRational(1, m));
        }
        A.push_back(pb.build());
    }
    // S_l(t′ − t″).
    std::vector<SparsePoly> S{SparsePoly::constant(1, 2)};
    const int L = 2 * W + 2;
    for (int l = 1; l <= L; ++l) {
        PolyBuilder pb(2);
        for (int j = 1; j <= l; ++j) {
            SparsePoly dt = SparsePoly::variable(var(Family::TP, j), 2) - SparsePoly::variable(var(Family::TPP, j), 2);
            pb.add(dt * S[l - j], BigRational(j, l));
        }
        S.push_back(pb.build());
    }
    const HeisVec alpha = HeisVec::of(HeisGen::ALPHA), gamma = HeisVec::of(HeisGen::GAMMA);
    PolyBuilder out(2);
    for (int m = 0; m <= W; ++m) {
        if (A[m].is_zero()) continue;
        for (int j = -W - 1; j <= W; ++j) {
            SparsePoly gj = tensor_heis(fock, gamma, j, Slot::DoublePrimed, A[m]);
            if (gj.is_zero()) continue;
            for (int i = -W - 1; i <= W; ++i) {
                const int l = m + i + j + 1;
                if (l < 0 || l > L) continue;
                SparsePoly ai = tensor_heis(fock, alpha, i, Slot::Primed, gj);
                if (ai.is_zero()) continue;
                out.add(S[l] * ai);
            }
        }
    }
    return out.build().shift_charge(0, 1).shift_charge(1, -1);
}

SparsePoly Casimir::ef_residue_direct(const SparsePoly& w) const {
    PolyBuilder out(2);
    for (const auto& [u, p] : split_tensor(w, Slot::Primed)) {
        const int w1 = u.max_weight(), w2 = p.max_weight();
        const int jlo = -1 - w2, jhi = w1;
        if (jlo > jhi) continue;
        auto A = wak_.field_modes(AffineGen::E, jlo, jhi, u);
        auto B = wak_.field_modes(AffineGen::F, -1 - jhi, -1 - jlo, p);
        for (int j = jlo; j <= jhi; ++j) out.add(tensor_product(A[j - jlo], B[-1 - j - (-1 - jhi)]));
    }
    return out.build();
}

namespace {

std::string tensor_on(const SparsePoly& w) { return " on " + w.to_string(); }

VerificationReport casimir_campaign(const Casimir& cas, const CampaignOptions& opt, bool corrected) {
    auto basis = tensor_basis_vectors(opt);
    const AffineGen gens[] = {AffineGen::E, AffineGen::F, AffineGen::H};
    const int M = opt.max_mode;
    const Wakimoto& wak = cas.realization();
    const LevelScalar half_k = wak.level().k() * LevelScalar::rational(1, 2);
    return run_campaign(corrected ? "casimir-covariance" : "casimir-commute", basis.size(), [&](std::size_t i) {
        VerificationReport r;
        const SparsePoly& w = basis[i];
        auto omega_w = cas.casimir_modes(-M, M, w);
        for (AffineGen a : gens) {
            auto dw = cas.diag_modes(a, -M, M, w);
            std::vector<std::vector<SparsePoly>> d_omega;  // [n][m]
            for (int n = -M; n <= M; ++n) d_omega.push_back(cas.diag_modes(a, -M, M, omega_w[n + M]));
            // Δ(L_1 a)_(N) w for N = −2M−2..2M−2.
            std::vector<SparsePoly> l1a;
            if (corrected && a != AffineGen::H) {
                const int s = a == AffineGen::E ? 1 : -1;
                SlotFamily op = [&](const SparsePoly& v) {
                    std::vector<SparsePoly> out;
                    for (int N = -2 * M - 2; N <= 2 * M - 2; ++N) out.push_back(wak.vertex_mode(s, N, v));
                    return out;
                };
                const int count = 4 * M + 1;
                l1a = lift_family(op, count, Slot::Primed, w);
                auto l1b = lift_family(op, count, Slot::DoublePrimed, w);
                for (int c = 0; c < count; ++c) l1a[c] += l1b[c];
            }
            for (int m = -M; m <= M; ++m) {
                auto om_dw = cas.casimir_modes(-M, M, dw[m + M]);
                for (int n = -M; n <= M; ++n) {
                    SparsePoly lhs = om_dw[n + M] - d_omega[n + M][m + M];
                    SparsePoly rhs(2);
                    if (corrected && !l1a.empty() && n * (n - 1) != 0)
                        rhs = l1a[m + n - 2 + 2 * M + 2].scaled(-half_k * LevelScalar(n * (n - 1)));
                    r.record(expect_equal(lhs, rhs,
                                          "[Ω_(" + std::to_string(n) + "), Δ" + affine_name(a) + "_(" +
                                              std::to_string(m) + ")]" + tensor_on(w),
                                          corrected ? "−(k/2)n(n−1)Δ(L_1 a)_(m+n−2)" : "0"));
                }
            }
        }
        return r;
    }, opt.policy, opt.fail_fast);
}

}  // namespace

VerificationReport verify_casimir_commutes(const Casimir& cas, const CampaignOptions& opt) {
    return casimir_campaign(cas, opt, false);
}

VerificationReport verify_casimir_covariance(const Casimir& cas, const CampaignOptions& opt) {
    return casimir_campaign(cas, opt, true);
}

std::vector<OrbitGenerator> default_orbit_generators() {
    return {{AffineGen::E, -1}, {AffineGen::F, -1}, {AffineGen::H, -1}, {AffineGen::E, 0}, {AffineGen::F, 0}};
}

std::vector<SparsePoly> orbit_vectors(const Casimir& cas, int depth, const std::vector<OrbitGenerator>& gens,
                                      int cap) {
    if (depth > cap)
        throw CapExceeded("orbit depth " + std::to_string(depth) + " exceeds configured cap " + std::to_string(cap));
    std::vector<SparsePoly> out;
    std::vector<SparsePoly> level{tensor_product(SparsePoly::constant(1, 1), SparsePoly::constant(1, 1))};
    out = level;
    for (int r = 1; r <= depth; ++r) {
        std::vector<SparsePoly> next;
        for (const auto& v : level)
            for (const auto& g : gens) {
                SparsePoly x = cas.diag_mode(g.g, g.n, v);
                if (!x.is_zero()) next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

VerificationReport verify_untwisted_hierarchy(const Casimir& cas, int depth, const LevelScalar& hh_coeff,
                                              ExecPolicy policy) {
    auto vecs = orbit_vectors(cas, depth, default_orbit_generators());
    return run_campaign("untwisted-hierarchy", vecs.size(), [&](std::size_t i) {
        VerificationReport r;
        r.record(expect_equal(cas.casimir_mode(0, vecs[i], hh_coeff), SparsePoly(2),
                              "Ω_(0) on orbit vector #" + std::to_string(i), "0"));
        return r;
    }, policy);
}

const SparsePoly& TauFamily::component(int m) const {
    if (m < lo_ || m > hi_)
        throw WindowTooSmall("charge " + std::to_string(m) + " outside the reach [" + std::to_string(lo_) + ", " +
                             std::to_string(hi_) + "] of the orbit word");
    auto it = parts_.find(m);
    return it == parts_.end() ? zero_ : it->second;
}

void TauFamily::set_component(int m, SparsePoly p) {
    lo_ = std::min(lo_, m);
    hi_ = std::max(hi_, m);
    parts_[m] = std::move(p);
}

std::vector<ExpFactor> default_tau_word() { return {{AffineGen::E, -1, 1}, {AffineGen::F, -1, 2}}; }

SparsePoly truncate_params(const SparsePoly& p, int d) {
    return p.filter([d](const Monomial& m) { return m.degree_in(Family::PARAM) <= d; });
}

TauFamily tau_orbit(const Wakimoto& wak, const std::vector<ExpFactor>& word, int max_param_degree) {
    SparsePoly v = SparsePoly::constant(1, 1);
    int up = 0, down = 0;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        SparsePoly term = v, acc = v;
        for (int r = 1; r <= max_param_degree; ++r) {
            term = wak.field_mode(it->g, it->n, term).times_var(var(Family::PARAM, it->param), BigRational(1, r));
            term = truncate_params(term, max_param_degree);
            if (term.is_zero()) break;
            acc += term;
        }
        v = std::move(acc);
        if (it->g == AffineGen::E) up += max_param_degree;
        if (it->g == AffineGen::F) down += max_param_degree;
    }
    std::map<int, PolyBuilder> parts;
    for (const auto& t : v) parts.try_emplace(t.mono.charge(0), 1).first->second.add(t.mono, t.coeff);
    std::map<int, SparsePoly> built;
    for (auto& [m, pb] : parts) built.emplace(m, pb.build());
    return TauFamily(std::move(built), -std::min(down, max_param_degree), std::min(up, max_param_degree),
                     max_param_degree);
}

}  // namespace wak
