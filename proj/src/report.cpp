#include "wak/report.hpp"

namespace wak {

void VerificationReport::record(std::optional<Failure> f) {
    ++total_checks;
    if (!f) return;
    ++failed_checks;
    if (failures.size() < kMaxStoredFailures) failures.push_back(std::move(*f));
}

void VerificationReport::merge(VerificationReport other) {
    total_checks += other.total_checks;
    failed_checks += other.failed_checks;
    for (auto& f : other.failures)
        if (failures.size() < kMaxStoredFailures) failures.push_back(std::move(f));
    for (auto& n : other.notes) notes.push_back(std::move(n));
}

VerificationReport run_campaign(std::string name, std::size_t count,
                                const std::function<VerificationReport(std::size_t)>& unit,
                                ExecPolicy policy, bool fail_fast) {
    std::vector<VerificationReport> parts(count);
    std::vector<char> ran(count, 0);
    std::exception_ptr error;
    std::atomic<long long> first_failure{static_cast<long long>(count)};
    const long long n = static_cast<long long>(count);
    auto run = [&](long long i) {
        if (fail_fast && i > first_failure.load()) return;
        parts[i] = unit(static_cast<std::size_t>(i));
        ran[i] = 1;
        if (fail_fast && !parts[i].pass()) {
            long long cur = first_failure.load();
            while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
            }
        }
    };
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < n; ++i) {
            try {
                run(i);
            } catch (...) {
#pragma omp critical(wak_campaign_error)
                if (!error) error = std::current_exception();
            }
        }
    } else {
        for (long long i = 0; i < n; ++i) run(i);
    }
    if (error) std::rethrow_exception(error);

    VerificationReport r;
    r.campaign = std::move(name);
    const long long stop = first_failure.load();
    for (long long i = 0; i < n; ++i) {
        // Units past the first failure may have run in parallel; drop them so
        // the report does not depend on scheduling.
        if (fail_fast && i > stop) break;
        if (ran[i]) r.merge(std::move(parts[i]));
    }
    if (fail_fast && stop < n - 1)
        r.notes.emplace_back("stopped_after_unit", std::to_string(stop) + " of " + std::to_string(n));
    return r;
}

std::optional<Failure> expect_equal(const SparsePoly& lhs, const SparsePoly& rhs, std::string lhs_desc,
                                    std::string rhs_desc) {
    SparsePoly d = lhs - rhs;
    if (d.is_zero()) return std::nullopt;
    return Failure{std::move(lhs_desc), std::move(rhs_desc), std::move(d)};
}

}  // namespace wak
