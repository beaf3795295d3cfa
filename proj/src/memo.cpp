#include "wak/memo.hpp"

#include <mutex>

#include "wak/errors.hpp"

namespace wak {

std::shared_ptr<const ModeMemo::Images> ModeMemo::images(const Monomial& m) const {
    {
        std::shared_lock lock(mu_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
    }
    auto img = std::make_shared<const Images>(gen_(SparsePoly::from_monomial(m)));
    std::unique_lock lock(mu_);
    return cache_.try_emplace(m, std::move(img)).first->second;
}

SparsePoly ModeMemo::apply(int n, const SparsePoly& v) const {
    if (n < lo_ || n > hi_) throw Error("mode " + std::to_string(n) + " outside memoized range");
    int arity = v.arity();
    PolyBuilder pb(arity);
    bool first = true;
    for (const auto& t : v) {
        const SparsePoly& img = (*images(t.mono))[n - lo_];
        if (first && !img.is_zero()) {
            pb = PolyBuilder(img.arity());
            first = false;
        }
        pb.add(img, t.coeff);
    }
    return pb.build();
}

ModeMemo::Images ModeMemo::apply_all(const SparsePoly& v) const {
    const int count = hi_ - lo_ + 1;
    std::vector<PolyBuilder> pbs;
    pbs.reserve(count);
    std::vector<bool> fresh(count, true);
    for (int i = 0; i < count; ++i) pbs.emplace_back(v.arity());
    for (const auto& t : v) {
        auto img = images(t.mono);
        for (int i = 0; i < count; ++i) {
            const SparsePoly& p = (*img)[i];
            if (p.is_zero()) continue;
            if (fresh[i]) {
                pbs[i] = PolyBuilder(p.arity());
                fresh[i] = false;
            }
            pbs[i].add(p, t.coeff);
        }
    }
    Images out;
    out.reserve(count);
    for (auto& pb : pbs) out.push_back(pb.build());
    return out;
}

std::size_t ModeMemo::cached() const {
    std::shared_lock lock(mu_);
    return cache_.size();
}

}  // namespace wak
