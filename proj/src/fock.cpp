#include "wak/fock.hpp"

#include "wak/errors.hpp"

namespace wak {

const char* heis_name(HeisGen g) {
    switch (g) {
        case HeisGen::ALPHA: return "alpha";
        case HeisGen::GAMMA: return "gamma";
        case HeisGen::DELTA: return "delta";
    }
    return "?";
}

HeisVec HeisVec::of(HeisGen g) {
    switch (g) {
        case HeisGen::ALPHA: return {1, 0, 0};
        case HeisGen::GAMMA: return {0, 1, 0};
        case HeisGen::DELTA: return {0, 0, 1};
    }
    return {};
}

SchurTable::SchurTable(Family family, LevelScalar scale, int arity, bool odd_only)
    : family_(family), scale_(std::move(scale)), arity_(arity), odd_only_(odd_only), zero_(arity) {}

const SparsePoly& SchurTable::get(int m) const {
    if (m < 0) return zero_;
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(table_.size()) <= m) {
        int r = static_cast<int>(table_.size());
        if (r == 0) {
            table_.push_back(SparsePoly::constant(1, arity_));
            continue;
        }
        PolyBuilder pb(arity_);
        LevelScalar inv_r = LevelScalar::rational(1, r);
        for (int j = 1; j <= r; ++j) {
            if (odd_only_ && j % 2 == 0) continue;
            const SparsePoly& prev = table_[r - j];
            if (prev.is_zero()) continue;
            pb.add_product(prev, Monomial::of(var(family_, j), 1, arity_), scale_ * LevelScalar(j) * inv_r);
        }
        table_.push_back(pb.build());
    }
    return table_[m];
}

SparsePoly schur(int m, Family family, int arity) {
    SchurTable t(family, 1, arity);
    return t.get(m);
}

SparsePoly reduced_schur(int m, Family family, int arity) {
    SchurTable t(family, 1, arity, true);
    return t.get(m);
}

FockSpace::FockSpace(Level level)
    : level_(std::move(level)), schur_plus_(Family::T, 1, 1), schur_minus_(Family::T, -1, 1) {}

LevelScalar FockSpace::pairing(HeisGen a, HeisGen b) const {
    return pairing(HeisVec::of(a), HeisVec::of(b));
}

LevelScalar FockSpace::pairing(const HeisVec& a, const HeisVec& b) const {
    // basis order (delta, alpha, gamma): [[0,1,-1],[1,1,c],[-1,c,1]]
    const LevelScalar& c = level_.c();
    LevelScalar r = a.delta * (b.alpha - b.gamma);
    r += a.alpha * (b.delta + b.alpha + c * b.gamma);
    r += a.gamma * (-b.delta + c * b.alpha + b.gamma);
    return r;
}

SparsePoly FockSpace::heis_mode(HeisGen g, int n, const SparsePoly& v) const {
    return heis_apply(HeisVec::of(g), n, v);
}

SparsePoly FockSpace::heis_apply(const HeisVec& a, int n, const SparsePoly& v) const {
    if (v.is_zero()) return v;
    if (n == 0) {
        LevelScalar s = a.alpha - a.gamma;
        if (s.is_zero()) return SparsePoly(v.arity());
        return v.scale_by([&s](const Monomial& m) { return s * LevelScalar(m.charge(0)); });
    }
    const LevelScalar& c = level_.c();
    if (n < 0) {
        int m = -n;
        PolyBuilder pb(v.arity());
        const LevelScalar* cf[3] = {&a.alpha, &a.gamma, &a.delta};
        const Family fam[3] = {Family::X, Family::Y, Family::T};
        for (int i = 0; i < 3; ++i) {
            if (cf[i]->is_zero()) continue;
            pb.add_product(v, Monomial::of(var(fam[i], m), 1, v.arity()), *cf[i] * LevelScalar(m));
        }
        return pb.build();
    }
    LevelScalar dx = a.alpha + c * a.gamma + a.delta;
    LevelScalar dy = c * a.alpha + a.gamma - a.delta;
    LevelScalar dt = a.alpha - a.gamma;
    const LevelScalar* cf[3] = {&dx, &dy, &dt};
    const Family fam[3] = {Family::X, Family::Y, Family::T};
    PolyBuilder pb(v.arity());
    for (const auto& t : v) {
        for (int i = 0; i < 3; ++i) {
            if (cf[i]->is_zero()) continue;
            Monomial mm = t.mono;
            unsigned e = mm.lower(var(fam[i], n));
            if (e == 0) continue;
            pb.add(std::move(mm), t.coeff * *cf[i] * LevelScalar(static_cast<long long>(e)));
        }
    }
    return pb.build();
}

namespace {

void enumerate_parts(int remaining, std::size_t min_part, const std::vector<std::pair<int, Family>>& parts,
                     Monomial& cur, std::vector<Monomial>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t p = min_part; p < parts.size(); ++p) {
        int idx = parts[p].first;
        if (idx > remaining) break;
        VarId v = var(parts[p].second, idx);
        cur.multiply_var(v);
        enumerate_parts(remaining - idx, p, parts, cur, out);
        cur.lower(v);
    }
}

}  // namespace

std::vector<Monomial> enumerate_monomials(int weight, const std::vector<std::pair<Family, bool>>& families,
                                          int arity, std::array<int, 2> charges) {
    std::vector<std::pair<int, Family>> parts;
    for (int idx = 1; idx <= weight; ++idx)
        for (const auto& [f, odd_only] : families)
            if (!odd_only || idx % 2 == 1) parts.emplace_back(idx, f);
    std::vector<Monomial> out;
    Monomial cur = Monomial::charged(arity, charges[0], charges[1]);
    enumerate_parts(weight, 0, parts, cur, out);
    return out;
}

std::vector<Monomial> graded_basis(int weight, int qlo, int qhi, int cap) {
    if (weight > cap)
        throw CapExceeded("basis weight " + std::to_string(weight) + " exceeds configured cap " + std::to_string(cap));
    if (weight < 0) return {};
    std::vector<Monomial> out;
    const std::vector<std::pair<Family, bool>> fams = {{Family::X, false}, {Family::Y, false}, {Family::T, false}};
    for (int q = qlo; q <= qhi; ++q) {
        auto part = enumerate_monomials(weight, fams, 1, {q, 0});
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace wak
