#include "wak/twisted.hpp"

#include <algorithm>
#include <map>

#include "wak/errors.hpp"

namespace wak {

namespace {

int parity(int J) { return ((J % 2) + 2) % 2; }
LevelScalar sign_of(int J) { return parity(J) ? LevelScalar(-1) : LevelScalar(1); }
const LevelScalar kHalf = LevelScalar::rational(1, 2);

TwHeisVec of_gen(AffineGen g, const Level& level) {
    switch (g) {
        case AffineGen::E: return TwHeisVec::alpha();
        case AffineGen::F: return TwHeisVec::gamma();
        case AffineGen::H: return {level.k(), 2, 0};
    }
    return {};
}

// D_m = R_m(−2s∂̃t) v for m = 0..max_m, odd t only.
std::vector<SparsePoly> derivative_series(int s, const SparsePoly& v, int max_m) {
    std::vector<SparsePoly> D(max_m + 1, SparsePoly(v.arity()));
    D[0] = v;
    for (int m = 1; m <= max_m; ++m) {
        PolyBuilder pb(v.arity());
        for (int j = 1; j <= m; j += 2)
            if (!D[m - j].is_zero()) pb.add(D[m - j].derive(var(Family::T, j)));
        D[m] = pb.build().scaled(LevelScalar::rational(-2 * s, m));
    }
    return D;
}

}  // namespace

Sl2Element Sl2Element::of(AffineGen g) {
    switch (g) {
        case AffineGen::E: return {1, 0, 0};
        case AffineGen::F: return {0, 1, 0};
        case AffineGen::H: return {0, 0, 1};
    }
    return {};
}

std::string Sl2Element::name() const {
    std::string out;
    const std::pair<const LevelScalar*, const char*> parts[3] = {{&e, "e"}, {&f, "f"}, {&h, "h"}};
    for (const auto& [c, n] : parts) {
        if (c->is_zero()) continue;
        std::string cs = c->to_string();
        if (!out.empty() && cs[0] != '-') out += "+";
        if (c->is_one())
            out += n;
        else if (cs == "-1")
            out += std::string("-") + n;
        else
            out += "(" + cs + ")" + n;
    }
    return out.empty() ? "0" : out;
}

Sl2Element sl2_bracket(const Sl2Element& a, const Sl2Element& b) {
    return {LevelScalar(2) * (a.h * b.e - a.e * b.h), LevelScalar(-2) * (a.h * b.f - a.f * b.h), a.e * b.f - a.f * b.e};
}

LevelScalar sl2_trace(const Sl2Element& a, const Sl2Element& b) {
    return a.e * b.f + a.f * b.e + LevelScalar(2) * a.h * b.h;
}

// ---------------------------------------------------------------- Fock space

TwistedFock::TwistedFock(Level level)
    : level_(std::move(level)), rplus_(Family::X, LevelScalar(1), 0, true), rminus_(Family::X, LevelScalar(-1), 0, true) {}

SparsePoly TwistedFock::heis_apply(const TwHeisVec& a, int J, const SparsePoly& v) const {
    if (J == 0 || v.is_zero()) return SparsePoly(v.arity());
    const bool odd = parity(J) == 1;
    if (J > 0) {
        PolyBuilder pb(v.arity());
        if (odd) {
            if (!a.delta.is_zero()) pb.add(v.derive(var(Family::T, J)), a.delta);
            if (!a.aminus.is_zero()) pb.add(v.derive(var(Family::X, J)), a.aminus);
        } else if (!a.aplus.is_zero()) {
            pb.add(v.derive(var(Family::X, J)), a.aplus);
        }
        return pb.build();
    }
    const int r = -J;
    const LevelScalar half_r = LevelScalar::rational(r, 2);
    PolyBuilder pb(v.arity());
    if (odd) {
        LevelScalar cx = (a.delta + a.aminus * level_.c_minus()) * half_r;
        if (!cx.is_zero()) pb.add(v.times_var(var(Family::X, r), cx));
        if (!a.aminus.is_zero()) pb.add(v.times_var(var(Family::T, r), a.aminus * half_r));
    } else if (!a.aplus.is_zero()) {
        pb.add(v.times_var(var(Family::X, r), a.aplus * level_.c_plus() * half_r));
    }
    return pb.build();
}

LevelScalar TwistedFock::pairing(const TwHeisVec& a, const TwHeisVec& b) const {
    return a.delta * b.aminus + a.aminus * b.delta + level_.c_minus() * a.aminus * b.aminus +
           level_.c_plus() * a.aplus * b.aplus;
}

std::vector<Monomial> twisted_graded_basis(int doubled_weight, int cap) {
    if (doubled_weight > cap)
        throw CapExceeded("basis weight " + std::to_string(doubled_weight) + " exceeds configured cap " +
                          std::to_string(cap));
    if (doubled_weight < 0) return {};
    return enumerate_monomials(doubled_weight, {{Family::X, false}, {Family::T, true}}, 0, {0, 0});
}

// ---------------------------------------------------------------- fields

SparsePoly TwistedWakimoto::vertex_mode(int s, int J, const SparsePoly& v) const {
    const int W = std::max(v.max_weight(), 0);
    auto D = derivative_series(s, v, W);
    PolyBuilder pb(v.arity());
    for (int m = 0; m <= W; ++m) {
        const int l = m - J - 2;
        if (l < 0 || D[m].is_zero()) continue;
        const SparsePoly& R = fock_.reduced_schur_x(l, s);
        if (!R.is_zero()) pb.add(R * D[m]);
    }
    return pb.build();
}

std::vector<SparsePoly> TwistedWakimoto::field_modes(AffineGen g, int Jlo, int Jhi, const SparsePoly& v) const {
    std::vector<SparsePoly> out(std::max(Jhi - Jlo + 1, 0), SparsePoly(v.arity()));
    if (out.empty() || v.is_zero()) return out;
    if (g == AffineGen::H) {
        const TwHeisVec h = of_gen(g, level());
        for (int J = Jlo; J <= Jhi; ++J) out[J - Jlo] = fock_.heis_apply(h, J, v);
        return out;
    }
    const int s = g == AffineGen::E ? 1 : -1;
    const TwHeisVec base = of_gen(g, level());
    const int W = std::max(v.max_weight(), 0);
    auto D = derivative_series(s, v, W);
    std::vector<PolyBuilder> acc(out.size(), PolyBuilder(v.arity()));
    for (int m = 0; m <= W; ++m) {
        if (D[m].is_zero()) continue;
        for (int a = Jlo - m; a <= W - m; ++a) {
            SparsePoly X = a == 0 ? D[m].scaled(-kHalf) : fock_.heis_apply(base, a, D[m]);
            if (X.is_zero()) continue;
            // J = a − l + m
            for (int J = Jlo; J <= std::min(Jhi, a + m); ++J) {
                const SparsePoly& R = fock_.reduced_schur_x(a + m - J, s);
                if (!R.is_zero()) acc[J - Jlo].add(R * X);
            }
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i].build();
    return out;
}

SparsePoly TwistedWakimoto::field_mode(AffineGen g, int J, const SparsePoly& v) const {
    return std::move(field_modes(g, J, J, v).front());
}

std::vector<SparsePoly> TwistedWakimoto::element_modes(const Sl2Element& x, int Jlo, int Jhi,
                                                       const SparsePoly& v) const {
    std::vector<PolyBuilder> acc(std::max(Jhi - Jlo + 1, 0), PolyBuilder(v.arity()));
    const std::pair<AffineGen, const LevelScalar*> parts[3] = {
        {AffineGen::E, &x.e}, {AffineGen::F, &x.f}, {AffineGen::H, &x.h}};
    for (const auto& [g, c] : parts) {
        if (c->is_zero()) continue;
        auto modes = field_modes(g, Jlo, Jhi, v);
        for (std::size_t i = 0; i < modes.size(); ++i) acc[i].add(modes[i], *c);
    }
    std::vector<SparsePoly> out;
    out.reserve(acc.size());
    for (auto& b : acc) out.push_back(b.build());
    return out;
}

SparsePoly TwistedWakimoto::heis_quadratic(const TwHeisVec& a, const TwHeisVec& b, int N, int par,
                                           const SparsePoly& v) const {
    const int W = std::max(v.max_weight(), 0);
    PolyBuilder pb(v.arity());
    for (int J = N - W - 1; J <= W + 1; ++J) {
        if (parity(J) != par) continue;
        const int K = N - J;
        SparsePoly r = J < 0 ? fock_.heis_apply(a, J, fock_.heis_apply(b, K, v))
                             : fock_.heis_apply(b, K, fock_.heis_apply(a, J, v));
        pb.add(r);
    }
    return pb.build();
}

SparsePoly TwistedWakimoto::virasoro_mode(int n, const SparsePoly& v, bool with_eighth) const {
    const Level& lv = level();
    const LevelScalar& c = lv.c();
    const TwHeisVec d = TwHeisVec::delta_vec(), am2{0, 2, 0}, ap2{0, 0, 2};
    const int N = 2 * n;
    PolyBuilder pb(v.arity());
    pb.add(heis_quadratic(d, d, N, 1, v), (c - LevelScalar(1)) * LevelScalar::rational(1, 4));
    pb.add(heis_quadratic(d, am2, N, 1, v), kHalf);
    pb.add(heis_quadratic(ap2, ap2, N, 0, v), lv.inv_k_plus_2() * LevelScalar::rational(1, 4));
    if (n == 0 && with_eighth) pb.add(v, LevelScalar::rational(1, 8));
    return pb.build();
}

// ---------------------------------------------------------------- campaigns

std::vector<SparsePoly> twisted_basis_vectors(const TwistedOptions& opt) {
    std::vector<SparsePoly> out;
    for (int w = 0; w <= opt.max_weight; ++w)
        for (auto& m : twisted_graded_basis(w, opt.cap)) out.push_back(SparsePoly::from_monomial(std::move(m)));
    return out;
}

namespace {

std::string mode_label(int J) {
    if (parity(J) == 0) return std::to_string(J / 2);
    return std::to_string(J) + "/2";
}

}  // namespace

VerificationReport verify_twisted_heisenberg(const TwistedFock& fock, const TwistedOptions& opt) {
    const auto basis = twisted_basis_vectors(opt);
    const std::pair<TwHeisVec, const char*> gens[3] = {
        {TwHeisVec::delta_vec(), "delta"}, {{0, 1, 0}, "A-"}, {{0, 0, 1}, "A+"}};
    const int M = opt.max_doubled_mode;
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        const SparsePoly& v = basis[i];
        for (const auto& [a, an] : gens)
            for (const auto& [b, bn] : gens)
                for (int J = -M; J <= M; ++J)
                    for (int K = -M; K <= M; ++K) {
                        SparsePoly lhs = fock.heis_apply(a, J, fock.heis_apply(b, K, v)) -
                                         fock.heis_apply(b, K, fock.heis_apply(a, J, v));
                        SparsePoly rhs(0);
                        if (J + K == 0 && J != 0) rhs = v.scaled(LevelScalar::rational(J, 2) * fock.pairing(a, b));
                        // Modes of the wrong parity are zero on both sides.
                        const bool a_ok = a.aplus.is_zero() ? parity(J) == 1 : parity(J) == 0;
                        if (!a_ok) rhs = SparsePoly(0);
                        r.record(expect_equal(lhs, rhs,
                                              std::string("[") + an + "_(" + mode_label(J) + ")," + bn + "_(" +
                                                  mode_label(K) + ")] " + v.to_string(),
                                              rhs.to_string()));
                    }
        return r;
    };
    return run_campaign("twisted-heisenberg", basis.size(), unit, opt.policy, opt.fail_fast);
}

VerificationReport verify_twisted_affine(const TwistedWakimoto& wak, const TwistedOptions& opt) {
    const auto basis = twisted_basis_vectors(opt);
    const int M = opt.max_doubled_mode;
    // a ∈ {h, e+f, e−f} with their allowed parities.
    const std::vector<std::pair<Sl2Element, int>> as = {
        {{0, 0, 1}, 1}, {{1, 1, 0}, 0}, {{1, -1, 0}, 1}};
    const Sl2Element bs[3] = {Sl2Element::of(AffineGen::E), Sl2Element::of(AffineGen::F), Sl2Element::of(AffineGen::H)};
    const LevelScalar& k = wak.level().k();
    auto combo = [](const Sl2Element& x, const std::array<std::vector<SparsePoly>, 3>& S, int idx) {
        PolyBuilder pb(0);
        if (!x.e.is_zero()) pb.add(S[0][idx], x.e);
        if (!x.f.is_zero()) pb.add(S[1][idx], x.f);
        if (!x.h.is_zero()) pb.add(S[2][idx], x.h);
        return pb.build();
    };
    auto singles = [&wak](int lo, int hi, const SparsePoly& v) {
        return std::array<std::vector<SparsePoly>, 3>{wak.field_modes(AffineGen::E, lo, hi, v),
                                                      wak.field_modes(AffineGen::F, lo, hi, v),
                                                      wak.field_modes(AffineGen::H, lo, hi, v)};
    };
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        const SparsePoly& v = basis[i];
        auto sv = singles(-2 * M, 2 * M, v);
        for (const auto& b : bs) {
            for (int K = -M; K <= M; ++K) {
                SparsePoly bv = combo(b, sv, K + 2 * M);
                auto sbv = singles(-M, M, bv);
                for (const auto& [a, par] : as) {
                    for (int J = -M; J <= M; ++J) {
                        if (parity(J) != par) continue;
                        SparsePoly av = combo(a, sv, J + 2 * M);
                        auto sav = singles(K, K, av);
                        SparsePoly lhs = combo(a, sbv, J + M) - combo(b, sav, 0);
                        SparsePoly rhs = combo(sl2_bracket(a, b), sv, J + K + 2 * M);
                        if (J + K == 0) rhs += v.scaled(LevelScalar::rational(J, 2) * sl2_trace(a, b) * k);
                        r.record(expect_equal(lhs, rhs,
                                              "[" + a.name() + "_(" + mode_label(J) + ")," + b.name() + "_(" +
                                                  mode_label(K) + ")] " + v.to_string(),
                                              rhs.to_string()));
                    }
                }
            }
        }
        return r;
    };
    return run_campaign("twisted-affine", basis.size(), unit, opt.policy, opt.fail_fast);
}

VerificationReport verify_twisted_virasoro(const TwistedWakimoto& wak, const TwistedOptions& opt, bool with_eighth) {
    const auto basis = twisted_basis_vectors(opt);
    const int Mv = std::max(1, opt.max_doubled_mode / 2);
    const SparsePoly one = SparsePoly::constant(1);
    auto L = [&](int n, const SparsePoly& v) { return wak.virasoro_mode(n, v, with_eighth); };
    // C(m) = ([L_m, L_−m] − 2m L_0) 1.
    const int Mc = std::max(Mv, 2);
    std::vector<LevelScalar> C(Mc + 1);
    for (int m = 1; m <= Mc; ++m) {
        SparsePoly x = L(m, L(-m, one)) - L(-m, L(m, one)) - L(0, one).scaled(LevelScalar(2 * m));
        C[m] = x.coefficient(Monomial());
    }
    const LevelScalar central = C[2] * LevelScalar(2);
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        const SparsePoly& v = basis[i];
        for (int m = -Mv; m <= Mv; ++m)
            for (int n = -Mv; n <= Mv; ++n) {
                SparsePoly lhs = L(m, L(n, v)) - L(n, L(m, v));
                SparsePoly rhs = L(m + n, v).scaled(LevelScalar(m - n));
                if (m + n == 0 && m != 0) rhs += v.scaled(m > 0 ? C[m] : -C[-m]);
                r.record(expect_equal(lhs, rhs,
                                      "[L_" + std::to_string(m) + ",L_" + std::to_string(n) + "] " + v.to_string(),
                                      rhs.to_string()));
            }
        return r;
    };
    auto rep = run_campaign("twisted-virasoro", basis.size(), unit, opt.policy, opt.fail_fast);
    // The central term must have the form c/12 (m³ − m).
    for (int m = 1; m <= Mc; ++m) {
        LevelScalar expect = central * LevelScalar::rational(m * m * m - m, 12);
        rep.total_checks++;
        if (!(expect == C[m])) {
            rep.failed_checks++;
            rep.failures.push_back({"C(" + std::to_string(m) + ") = " + C[m].to_string(),
                                    "c/12(m^3-m) = " + expect.to_string(), SparsePoly(0)});
        }
    }
    rep.notes.emplace_back("central_charge", central.to_string());
    rep.notes.emplace_back("L0_vacuum", L(0, one).coefficient(Monomial()).to_string());
    return rep;
}

VerificationReport verify_twisted_equivariance(const TwistedWakimoto& wak, const TwistedOptions& opt) {
    const auto basis = twisted_basis_vectors(opt);
    const int M = opt.max_doubled_mode;
    const TwistedFock& fock = wak.fock();
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        const SparsePoly& v = basis[i];
        auto E = wak.field_modes(AffineGen::E, -M, M, v);
        auto F = wak.field_modes(AffineGen::F, -M, M, v);
        auto H = wak.field_modes(AffineGen::H, -M, M, v);
        for (int J = -M; J <= M; ++J) {
            const std::string at = "_(" + mode_label(J) + ") " + v.to_string();
            r.record(expect_equal(F[J + M], E[J + M].scaled(sign_of(J)), "f" + at, "(-1)^2j e" + at));
            r.record(expect_equal(fock.heis_apply(TwHeisVec::gamma(), J, v),
                                  fock.heis_apply(TwHeisVec::alpha(), J, v).scaled(sign_of(J)), "gamma" + at,
                                  "(-1)^2j alpha" + at));
            if (parity(J) == 0) r.record(expect_equal(H[J + M], SparsePoly(0), "h" + at, "0"));
        }
        return r;
    };
    return run_campaign("twisted-equivariance", basis.size(), unit, opt.policy, opt.fail_fast);
}

// ---------------------------------------------------------------- Casimir

SparsePoly TwistedCasimir::diag_mode(const Sl2Element& x, int J, const SparsePoly& w) const {
    SlotFamily op = [&](const SparsePoly& v) { return wak_.element_modes(x, J, J, v); };
    SparsePoly a = std::move(lift_family(op, 1, Slot::Primed, w, kTwistedLayout).front());
    SparsePoly b = std::move(lift_family(op, 1, Slot::DoublePrimed, w, kTwistedLayout).front());
    return a + b;
}

SparsePoly TwistedCasimir::casimir_mode(int n, const SparsePoly& w, TwistedAssembly assembly,
                                        bool with_eighth) const {
    const int N = 2 * n - 2;
    PolyBuilder acc(0);
    const LevelScalar mk = -wak_.level().k();
    struct Block {
        AffineGen a, b;
        LevelScalar coeff;
        bool rotate;
    };
    std::vector<Block> blocks;
    if (assembly == TwistedAssembly::Direct)
        blocks = {{AffineGen::E, AffineGen::F, 1, false}, {AffineGen::F, AffineGen::E, 1, false}};
    else
        blocks = {{AffineGen::E, AffineGen::E, 2, true}};
    blocks.push_back({AffineGen::H, AffineGen::H, kHalf, false});
    for (const auto& [u, p] : split_tensor(w, Slot::Primed, kTwistedLayout)) {
        const int w1 = std::max(u.max_weight(), 0), w2 = std::max(p.max_weight(), 0);
        // I ≤ w1 and J = N − I ≤ w2.
        const int Ilo = N - w2, Ihi = w1;
        if (Ilo <= Ihi) {
            for (const auto& bl : blocks) {
                auto A = wak_.field_modes(bl.a, Ilo, Ihi, u);
                auto B = wak_.field_modes(bl.b, N - Ihi, N - Ilo, p);
                for (int I = Ilo; I <= Ihi; ++I) {
                    const SparsePoly& x = A[I - Ilo];
                    const SparsePoly& y = B[N - I - (N - Ihi)];
                    if (x.is_zero() || y.is_zero()) continue;
                    LevelScalar c = bl.rotate ? bl.coeff * sign_of(N - I) : bl.coeff;
                    acc.add(tensor_product(x, y, kTwistedLayout), c);
                }
            }
        }
        acc.add(tensor_product(u, wak_.virasoro_mode(n - 1, p, with_eighth), kTwistedLayout), mk);
        acc.add(tensor_product(wak_.virasoro_mode(n - 1, u, with_eighth), p, kTwistedLayout), mk);
    }
    return acc.build();
}

std::vector<TwistedOrbitGenerator> default_twisted_generators() {
    return {{{0, 0, 1}, -1}, {{1, 1, 0}, -2}, {{1, -1, 0}, -1}};
}

std::vector<SparsePoly> twisted_orbit_vectors(const TwistedCasimir& cas, int depth,
                                              const std::vector<TwistedOrbitGenerator>& gens, int cap) {
    if (depth > cap)
        throw CapExceeded("orbit depth " + std::to_string(depth) + " exceeds configured cap " + std::to_string(cap));
    const SparsePoly one = SparsePoly::constant(1);
    std::vector<SparsePoly> layer{tensor_product(one, one, kTwistedLayout)};
    std::vector<SparsePoly> out = layer;
    for (int d = 1; d <= depth; ++d) {
        std::vector<SparsePoly> next;
        for (const auto& w : layer)
            for (const auto& g : gens) {
                SparsePoly x = cas.diag_mode(g.x, g.J, w);
                if (!x.is_zero()) next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

VerificationReport verify_twisted_hierarchy(const TwistedCasimir& cas, int depth, bool with_eighth,
                                            ExecPolicy policy) {
    const auto vecs = twisted_orbit_vectors(cas, depth, default_twisted_generators());
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        SparsePoly x = cas.casimir_mode(2, vecs[i], TwistedAssembly::Direct, with_eighth);
        r.record(expect_equal(x, SparsePoly(0), "Omega_(2) orbit vector " + std::to_string(i), "0"));
        return r;
    };
    return run_campaign("twisted-hierarchy", vecs.size(), unit, policy);
}

VerificationReport verify_twisted_assemblies(const TwistedCasimir& cas, int lo, int hi,
                                             const std::vector<SparsePoly>& vectors, ExecPolicy policy) {
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        for (int n = lo; n <= hi; ++n)
            r.record(expect_equal(cas.casimir_mode(n, vectors[i], TwistedAssembly::Direct),
                                  cas.casimir_mode(n, vectors[i], TwistedAssembly::Rotated),
                                  "direct Omega_(" + std::to_string(n) + ") vector " + std::to_string(i),
                                  "rotated"));
        return r;
    };
    return run_campaign("twisted-assemblies", vectors.size(), unit, policy);
}

std::vector<SparsePoly> twisted_tensor_vectors(const TwistedOptions& opt) {
    std::vector<SparsePoly> out;
    for (int w1 = 0; w1 <= opt.max_weight; ++w1)
        for (const auto& a : twisted_graded_basis(w1, opt.cap))
            for (int w2 = 0; w1 + w2 <= opt.max_weight; ++w2)
                for (const auto& b : twisted_graded_basis(w2, opt.cap))
                    out.push_back(tensor_product(SparsePoly::from_monomial(a), SparsePoly::from_monomial(b),
                                                 kTwistedLayout));
    return out;
}

VerificationReport verify_twisted_covariance(const TwistedCasimir& cas, const TwistedOptions& opt, int n_lo,
                                             int n_hi) {
    const auto vecs = twisted_tensor_vectors(opt);
    const TwistedWakimoto& wak = cas.realization();
    const int M = opt.max_doubled_mode;
    const LevelScalar half_k = wak.level().k() * kHalf;
    auto unit = [&](std::size_t i) {
        VerificationReport r;
        const SparsePoly& w = vecs[i];
        for (AffineGen g : {AffineGen::E, AffineGen::F, AffineGen::H}) {
            const Sl2Element x = Sl2Element::of(g);
            for (int J = -M; J <= M; ++J) {
                SparsePoly dw = cas.diag_mode(x, J, w);
                for (int n = n_lo; n <= n_hi; ++n) {
                    SparsePoly lhs = cas.casimir_mode(n, dw) - cas.diag_mode(x, J, cas.casimir_mode(n, w));
                    SparsePoly rhs(0);
                    if (g != AffineGen::H && n * (n - 1) != 0) {
                        const int s = g == AffineGen::E ? 1 : -1;
                        const int K = J + 2 * n - 4;
                        SlotFamily op = [&](const SparsePoly& v) { return std::vector<SparsePoly>{wak.vertex_mode(s, K, v)}; };
                        rhs = lift_family(op, 1, Slot::Primed, w, kTwistedLayout).front() +
                              lift_family(op, 1, Slot::DoublePrimed, w, kTwistedLayout).front();
                        rhs = rhs.scaled(-half_k * LevelScalar(n * (n - 1)));
                    }
                    r.record(expect_equal(lhs, rhs,
                                          "[Omega_(" + std::to_string(n) + "), D" + affine_name(g) + "_(" +
                                              mode_label(J) + ")] " + w.to_string(),
                                          rhs.to_string()));
                }
            }
        }
        return r;
    };
    return run_campaign("twisted-covariance", vecs.size(), unit, opt.policy, opt.fail_fast);
}

// ---------------------------------------------------------------- bar form

ExtractionWindow twisted_reduced_window(bool independence) {
    ExtractionWindow w{2, 0, 0, 1, {}};
    if (independence)
        w.independent = {var(Family::X, 3), var(Family::X, 4), var(Family::T, 3), var(Family::T, 5)};
    return w;
}

namespace {

// a_(J/2) in slot s written in bar coordinates.
SparsePoly tw_heis_bar(const Level& level, const TwHeisVec& a, int J, int s) {
    PolyBuilder pb(0);
    if (J == 0) return pb.build();
    const bool odd = parity(J) == 1;
    auto coord = [&pb, s](Family f, Family bar, int r, const LevelScalar& c) {
        if (c.is_zero()) return;
        pb.add(Monomial::of(var(f, r)), c);
        pb.add(Monomial::of(var(bar, r)), c * LevelScalar(s));
    };
    auto deriv = [&pb, s](Family d, Family sym, int r, const LevelScalar& c) {
        if (c.is_zero()) return;
        pb.add(Monomial::of(var(d, r)), c * kHalf);
        pb.add(Monomial::of(var(sym, r)), c * kHalf * LevelScalar(s));
    };
    if (J > 0) {
        if (odd) {
            deriv(Family::DT, Family::W, J, a.delta);
            deriv(Family::DX, Family::U, J, a.aminus);
        } else {
            deriv(Family::DX, Family::U, J, a.aplus);
        }
        return pb.build();
    }
    const int r = -J;
    const LevelScalar half_r = LevelScalar::rational(r, 2);
    if (odd) {
        coord(Family::X, Family::XBAR, r, (a.delta + a.aminus * level.c_minus()) * half_r);
        coord(Family::T, Family::TBAR, r, a.aminus * half_r);
    } else {
        coord(Family::X, Family::XBAR, r, a.aplus * level.c_plus() * half_r);
    }
    return pb.build();
}

// Â_a: the Heisenberg mode, −½ at a = 0.
SparsePoly hat_bar(const Level& level, const TwHeisVec& base, int a, int s) {
    if (a == 0) return SparsePoly::constant(-kHalf);
    return tw_heis_bar(level, base, a, s);
}

// R_m(scale·∂̃W) with ∂̃W_r = W_r/r over odd r.
std::vector<SparsePoly> w_schur(int max_m, int scale) {
    std::vector<SparsePoly> S(std::max(max_m + 1, 1), SparsePoly(0));
    S[0] = SparsePoly::constant(1);
    for (int m = 1; m <= max_m; ++m) {
        PolyBuilder pb(0);
        for (int j = 1; j <= m; j += 2) pb.add(S[m - j].times_var(var(Family::W, j)), LevelScalar(scale));
        S[m] = pb.build().scaled(LevelScalar::rational(1, m));
    }
    return S;
}

}  // namespace

SparsePoly twisted_bar_operator(const TwistedWakimoto& wak, int n, TwistedPart part, int creation_max,
                                int xbar_weight, TwistedAssembly assembly) {
    const Level& level = wak.level();
    const int Nc = creation_max, N = 2 * n - 2;
    PolyBuilder pb(0);
    {
        const int mmax = xbar_weight + N + 2 * Nc;
        SchurTable xplus(Family::XBAR, LevelScalar(2), 0, true), xminus(Family::XBAR, LevelScalar(-2), 0, true);
        auto dminus = w_schur(std::max(mmax, 0), -2), dplus = w_schur(std::max(mmax, 0), 2);
        struct Pass {
            TwHeisVec first, second;
            bool plus;
            LevelScalar coeff;
            bool rotate;
        };
        std::vector<Pass> passes;
        if (assembly == TwistedAssembly::Direct)
            passes = {{TwHeisVec::alpha(), TwHeisVec::gamma(), true, 1, false},
                      {TwHeisVec::gamma(), TwHeisVec::alpha(), false, 1, false}};
        else
            passes = {{TwHeisVec::alpha(), TwHeisVec::alpha(), true, 2, true}};
        for (const auto& ps : passes) {
            for (int l = 0; l <= xbar_weight; ++l) {
                const SparsePoly& R = ps.plus ? xplus.get(l) : xminus.get(l);
                if (R.is_zero()) continue;
                for (int a = -Nc; a <= l + N + Nc; ++a) {
                    SparsePoly A = hat_bar(level, ps.first, a, 1);
                    if (A.is_zero()) continue;
                    SparsePoly RA = R * A;
                    for (int b = -Nc; a + b <= l + N; ++b) {
                        // First keeps the Heisenberg-Heisenberg terms, Others the ones with a zero mode.
                        const bool heis = a != 0 && b != 0;
                        if ((part == TwistedPart::First && !heis) || (part == TwistedPart::Others && heis)) continue;
                        SparsePoly G = hat_bar(level, ps.second, b, -1);
                        if (G.is_zero()) continue;
                        const int m = l - a - b + N;
                        const SparsePoly& D = ps.plus ? dminus[m] : dplus[m];
                        LevelScalar c = ps.rotate ? ps.coeff * sign_of(b) : ps.coeff;
                        pb.add(RA * G * D, c);
                    }
                }
            }
        }
    }
    if (part != TwistedPart::First) {
        const TwHeisVec h = of_gen(AffineGen::H, level);
        for (int I = -Nc; I <= N + Nc; ++I) {
            if (parity(I) != 1) continue;
            SparsePoly A = tw_heis_bar(level, h, I, 1);
            SparsePoly B = tw_heis_bar(level, h, N - I, -1);
            if (!A.is_zero() && !B.is_zero()) pb.add(A * B, kHalf);
        }
        const LevelScalar& c = level.c();
        struct Quad {
            TwHeisVec a, b;
            int par;
            LevelScalar coeff;
        };
        const std::vector<Quad> quads = {
            {TwHeisVec::delta_vec(), TwHeisVec::delta_vec(), 1, (c - LevelScalar(1)) * LevelScalar::rational(1, 4)},
            {TwHeisVec::delta_vec(), {0, 2, 0}, 1, kHalf},
            {{0, 0, 2}, {0, 0, 2}, 0, level.inv_k_plus_2() * LevelScalar::rational(1, 4)},
        };
        const LevelScalar mk = -level.k();
        for (int s : {1, -1}) {
            for (const auto& q : quads)
                for (int J = -Nc; J <= N + Nc; ++J) {
                    if (parity(J) != q.par) continue;
                    SparsePoly A = tw_heis_bar(level, q.a, J, s);
                    SparsePoly B = tw_heis_bar(level, q.b, N - J, s);
                    if (!A.is_zero() && !B.is_zero()) pb.add(A * B, mk * q.coeff);
                }
            if (N == 0) pb.add(Monomial(), mk * LevelScalar::rational(1, 8));
        }
    }
    return pb.build();
}

HirotaEquation twisted_extract_equation(const TwistedWakimoto& wak, const Monomial& bar, const ExtractionWindow& win,
                                        TwistedPart part, TwistedAssembly assembly) {
    HirotaEquation eq;
    eq.single_tau = true;
    if (!win.admits_bar(bar)) return eq;
    const int xw = [&bar] {
        int w = 0;
        for (const auto& vp : bar.vars())
            if (vp.id().family == Family::XBAR) w += vp.id().index * static_cast<int>(vp.exp);
        return w;
    }();
    SparsePoly op = twisted_bar_operator(wak, 2, part, win.creation_max(), xw, assembly);
    eq.add(0, 0, extract_at(op, bar, win));
    return eq;
}

SparsePoly twisted_direct_coefficient(const TwistedCasimir& cas, const SparsePoly& tau, const Monomial& bar,
                                      const ExtractionWindow& win) {
    SparsePoly w = tensor_product(tau, tau, kTwistedLayout);
    SparsePoly out = to_bar_coordinates(cas.casimir_mode(2, w));
    PolyBuilder pb(0);
    for (const auto& t : out) {
        Monomial rest, barpart;
        for (const auto& vp : t.mono.vars()) {
            Family f = vp.id().family;
            if (f == Family::XBAR || f == Family::YBAR || f == Family::TBAR)
                barpart.multiply_var(vp.id(), vp.exp);
            else
                rest.multiply_var(vp.id(), vp.exp);
        }
        if (!(barpart == bar)) continue;
        pb.add(std::move(rest), t.coeff);
    }
    return restrict_to_point(pb.build(), win);
}

// ---------------------------------------------------------------- PDE forms

VarId jet(int nt, int nx, int ny) {
    if (nt < 0 || nx < 0 || ny < 0 || nt > 15 || nx > 15 || ny > 15) throw Error("jet order out of range");
    return var(Family::JET, nt * 256 + nx * 16 + ny);
}

std::array<int, 3> jet_orders(VarId v) { return {v.index / 256, (v.index / 16) % 16, v.index % 16}; }

namespace {

VarId jet_of(const std::array<int, 3>& o) { return jet(o[0], o[1], o[2]); }

bool is_coordinate_family(Family f) { return f == Family::X || f == Family::Y || f == Family::T; }
bool is_ordinary(Family f) { return f == Family::DX || f == Family::DY || f == Family::DT; }

using Series = std::map<std::array<int, 3>, SparsePoly>;

bool fits(const std::array<int, 3>& a, const std::array<int, 3>& lim) {
    return a[0] <= lim[0] && a[1] <= lim[1] && a[2] <= lim[2];
}

Series series_mul(const Series& a, const Series& b, const std::array<int, 3>& lim) {
    std::map<std::array<int, 3>, PolyBuilder> acc;
    for (const auto& [ea, pa] : a)
        for (const auto& [eb, pbp] : b) {
            std::array<int, 3> e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
            if (!fits(e, lim)) continue;
            acc.try_emplace(e, PolyBuilder(0)).first->second.add(pa * pbp);
        }
    Series out;
    for (auto& [e, b] : acc) {
        SparsePoly p = b.build();
        if (!p.is_zero()) out.emplace(e, std::move(p));
    }
    return out;
}

LevelScalar fact(int n) {
    BigRational r(1);
    for (int i = 2; i <= n; ++i) r = r * BigRational(i);
    return LevelScalar(r);
}

// D^β τ·τ / τ² as a polynomial in the jets.
SparsePoly hirota_jet(const std::array<int, 3>& beta) {
    const int total = beta[0] + beta[1] + beta[2];
    if (total % 2 == 1) return SparsePoly(0);
    Series S;
    for (int a = 0; a <= beta[0]; ++a)
        for (int b = 0; b <= beta[1]; ++b)
            for (int c = 0; c <= beta[2]; ++c) {
                const int g = a + b + c;
                if (g < 2 || g % 2 == 1) continue;
                S.emplace(std::array<int, 3>{a, b, c},
                          SparsePoly::variable(jet(a, b, c)).scaled(LevelScalar(2) / (fact(a) * fact(b) * fact(c))));
            }
    Series E{{{0, 0, 0}, SparsePoly::constant(1)}}, term = E;
    for (int k = 1; 2 * k <= total; ++k) {
        term = series_mul(term, S, beta);
        for (auto& [e, p] : term) p = p.scaled(LevelScalar::rational(1, k));
        for (const auto& [e, p] : term) E[e] += p;
    }
    auto it = E.find(beta);
    if (it == E.end()) return SparsePoly(0);
    return it->second.scaled(fact(beta[0]) * fact(beta[1]) * fact(beta[2]));
}

// Total derivative of a jet polynomial along direction d.
SparsePoly total_derivative(const SparsePoly& p, int d) {
    std::vector<VarId> jets;
    for (const auto& t : p)
        for (const auto& vp : t.mono.vars())
            if (vp.id().family == Family::JET) jets.push_back(vp.id());
    std::sort(jets.begin(), jets.end());
    jets.erase(std::unique(jets.begin(), jets.end()), jets.end());
    PolyBuilder pb(0);
    for (VarId j : jets) {
        auto o = jet_orders(j);
        o[d] += 1;
        pb.add(p.derive(j).times_var(jet_of(o)));
    }
    return pb.build();
}

std::string coordinate_name(VarId v, const PdeRelabel& rl) {
    static const char* names[3] = {"t", "x", "y"};
    return names[rl.direction(v)];
}

std::string jet_label(VarId j) {
    auto o = jet_orders(j);
    std::string s;
    s.append(o[0], 't');
    s.append(o[1], 'x');
    s.append(o[2], 'y');
    return s.empty() ? "u" : "u_{" + s + "}";
}

}  // namespace

int PdeRelabel::direction(VarId coordinate) const {
    if (coordinate == t) return 0;
    if (coordinate == x) return 1;
    if (coordinate == y) return 2;
    throw NoncommutingSubstitution("coordinate " + var_name(coordinate) + " is not part of the PDE relabelling");
}

void PdeRelabel::validate() const {
    if (t == x || t == y || x == y) throw NoncommutingSubstitution("PDE relabelling maps two directions to one coordinate");
    for (VarId v : {t, x, y})
        if (!is_coordinate_family(v.family)) throw NoncommutingSubstitution("PDE relabelling target is not a coordinate");
}

const char* pde_variant_name(PdeVariant v) {
    switch (v) {
        case PdeVariant::General: return "general";
        case PdeVariant::Critical: return "critical";
        case PdeVariant::UyZero: return "uy-zero";
    }
    return "?";
}

SparsePoly hirota_to_jets(const HirotaOperator& P, const PdeRelabel& relabel) {
    relabel.validate();
    std::map<std::array<int, 3>, SparsePoly> cache;
    PolyBuilder pb(0);
    for (const auto& t : P) {
        std::array<int, 3> beta{0, 0, 0}, alpha{0, 0, 0};
        Monomial pre;
        for (const auto& vp : t.mono.vars()) {
            Family f = vp.id().family;
            const int e = static_cast<int>(vp.exp);
            if (is_hirota_symbol(f))
                beta[relabel.direction(var(coordinate_of(f), vp.id().index))] += e;
            else if (is_ordinary(f))
                alpha[relabel.direction(var(coordinate_of(f), vp.id().index))] += e;
            else if (is_coordinate_family(f)) {
                relabel.direction(vp.id());
                pre.multiply_var(vp.id(), vp.exp);
            } else
                throw Error("unexpected symbol " + var_name(vp.id()) + " in a Hirota operator");
        }
        auto it = cache.find(beta);
        if (it == cache.end()) it = cache.emplace(beta, hirota_jet(beta)).first;
        SparsePoly G = it->second;
        for (int d = 0; d < 3; ++d)
            for (int r = 0; r < alpha[d]; ++r) {
                std::array<int, 3> e{0, 0, 0};
                e[d] = 1;
                G = total_derivative(G, d) + G.times_var(jet_of(e), LevelScalar(2));
            }
        pb.add(G.times_monomial(pre), t.coeff);
    }
    return pb.build();
}

PdeForm pde_from_equation(const HirotaEquation& eq, const PdeRelabel& relabel) {
    PolyBuilder pb(0);
    for (const auto& [k, P] : eq.blocks) pb.add(hirota_to_jets(P, relabel));
    SparsePoly R = pb.build();
    const Monomial ut = Monomial::of(jet(1, 0, 0));
    LevelScalar lambda = R.coefficient(ut);
    if (lambda.is_zero()) throw Error("the equation has no u_t term to solve for");
    SparsePoly rhs = (SparsePoly::from_monomial(ut, lambda) - R).scaled(lambda.inverse());
    return {rhs, relabel};
}

PdeForm pde_forms(const TwistedWakimoto& wak, PdeVariant which) {
    HirotaEquation eq = twisted_extract_equation(wak, Monomial(), twisted_reduced_window(true));
    PdeForm f = pde_from_equation(eq);
    if (which == PdeVariant::Critical) {
        f.rhs = f.rhs.specialize(BigRational(-2));
    } else if (which == PdeVariant::UyZero) {
        const PdeRelabel rl = f.relabel;
        f.rhs = f.rhs.filter([&rl](const Monomial& m) {
            for (const auto& vp : m.vars()) {
                if (vp.id().family == Family::JET && jet_orders(vp.id())[2] > 0) return false;
                if (vp.id() == rl.y) return false;
            }
            return true;
        });
    }
    return f;
}

namespace {

// Sorted for display: higher derivative order first.
int jet_order_of(const Monomial& m) {
    int best = 0;
    for (const auto& vp : m.vars())
        if (vp.id().family == Family::JET) {
            auto o = jet_orders(vp.id());
            best = std::max(best, o[0] + o[1] + o[2]);
        }
    return best;
}

std::string pde_monomial(const Monomial& m, const PdeRelabel& rl, bool latex) {
    std::string out;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& vp : m.vars()) {
            const bool is_jet = vp.id().family == Family::JET;
            if (is_jet != (pass == 1)) continue;
            std::string n = is_jet ? jet_label(vp.id()) : coordinate_name(vp.id(), rl);
            if (!latex) {
                n.erase(std::remove(n.begin(), n.end(), '{'), n.end());
                n.erase(std::remove(n.begin(), n.end(), '}'), n.end());
            }
            if (!out.empty()) out += latex ? " " : "*";
            out += n;
            if (vp.exp > 1) out += latex ? "^{" + std::to_string(vp.exp) + "}" : "^" + std::to_string(vp.exp);
        }
    return out;
}

std::vector<const Term*> display_order(const SparsePoly& p) {
    std::vector<const Term*> order;
    for (const auto& t : p) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
        int oa = jet_order_of(a->mono), ob = jet_order_of(b->mono);
        if (oa != ob) return oa > ob;
        return a->mono.degree() < b->mono.degree();
    });
    return order;
}

}  // namespace

std::string PdeForm::to_latex() const {
    std::vector<std::pair<LevelScalar, std::string>> terms;
    for (const Term* t : display_order(rhs)) terms.emplace_back(t->coeff, pde_monomial(t->mono, relabel, true));
    return "u_{t} = " + combination_latex(terms);
}

std::vector<std::pair<LevelScalar, std::string>> PdeForm::terms() const {
    std::vector<std::pair<LevelScalar, std::string>> out;
    for (const Term* t : display_order(rhs)) out.emplace_back(t->coeff, pde_monomial(t->mono, relabel, false));
    return out;
}

std::string PdeForm::to_string() const {
    std::string out = "u_t = ";
    bool first = true;
    for (const Term* t : display_order(rhs)) {
        if (!first) out += " + ";
        first = false;
        out += "(" + t->coeff.to_string() + ")*" + pde_monomial(t->mono, relabel, false);
    }
    return first ? out + "0" : out;
}

SparsePoly pde_residual_check(const HirotaOperator& P, const PdeRelabel& relabel, const SparsePoly& tau, int order) {
    relabel.validate();
    if (tau.arity() != 0) throw Error("pde_residual_check expects an uncharged tau");
    const LevelScalar tau0 = tau.coefficient(Monomial());
    if (tau0.is_zero()) throw Error("tau needs a nonzero constant term");
    int J = 0;
    for (const auto& t : P) {
        int d = 0;
        for (const auto& vp : t.mono.vars())
            if (is_hirota_symbol(vp.id().family) || is_ordinary(vp.id().family)) d += static_cast<int>(vp.exp);
        J = std::max(J, d);
    }
    const int Nmax = order + J;
    auto trunc = [](const SparsePoly& p, int n) { return p.filter([n](const Monomial& m) { return m.degree() <= n; }); };
    auto mul = [&](const SparsePoly& a, const SparsePoly& b) { return trunc(a * b, Nmax); };

    const SparsePoly g = tau.scaled(tau0.inverse()) - SparsePoly::constant(1);
    SparsePoly u(0), gp = SparsePoly::constant(1);
    for (int n = 1; n <= Nmax; ++n) {
        gp = mul(gp, g);
        if (gp.is_zero()) break;
        u += gp.scaled(LevelScalar::rational(n % 2 ? 1 : -1, n));
    }
    const VarId dir[3] = {relabel.t, relabel.x, relabel.y};
    std::map<std::uint32_t, SparsePoly> jets;
    auto jet_value = [&](VarId j) -> const SparsePoly& {
        auto it = jets.find(j.code());
        if (it != jets.end()) return it->second;
        SparsePoly d = u;
        auto o = jet_orders(j);
        for (int k = 0; k < 3; ++k)
            for (int r = 0; r < o[k]; ++r) d = d.derive(dir[k]);
        return jets.emplace(j.code(), std::move(d)).first->second;
    };
    SparsePoly R = hirota_to_jets(P, relabel);
    PolyBuilder rb(0);
    for (const auto& t : R) {
        Monomial pre;
        SparsePoly val = SparsePoly::constant(t.coeff);
        for (const auto& vp : t.mono.vars()) {
            if (vp.id().family != Family::JET) {
                pre.multiply_var(vp.id(), vp.exp);
                continue;
            }
            for (unsigned e = 0; e < vp.exp; ++e) val = mul(val, jet_value(vp.id()));
        }
        rb.add(val.times_monomial(pre));
    }
    SparsePoly rhs = trunc(mul(mul(tau, tau), rb.build()), order);
    SparsePoly lhs = trunc(hirota_apply(P, tau, tau), order);
    return lhs - rhs;
}

}  // namespace wak
