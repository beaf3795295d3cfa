#pragma once

#include <cstddef>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wak/sparse_poly.hpp"

namespace wak {

enum class ExecPolicy { Serial, Parallel };

struct Failure {
    std::string lhs;
    std::string rhs;
    SparsePoly difference;
};

struct VerificationReport {
    std::string campaign;
    std::size_t total_checks = 0;
    std::vector<Failure> failures;
    /// Free-form measured quantities (e.g. a central charge).
    std::vector<std::pair<std::string, std::string>> notes;

    /// Failed checks, including those not stored.
    std::size_t failed_checks = 0;

    bool pass() const noexcept { return failed_checks == 0; }
    /// Records one check; stores a failure if there is one.
    void record(std::optional<Failure> f);
    void merge(VerificationReport other);
};

/// Failures beyond this many are counted but not stored.
inline constexpr std::size_t kMaxStoredFailures = 32;

/// Runs unit(i) for i in [0, count); each unit returns a partial report.
/// Partials are merged in index order, so the result does not depend on the
/// policy or the thread count. With fail_fast, units after the first failing
/// one are skipped and a "stopped_after_unit" note is added.
VerificationReport run_campaign(std::string name, std::size_t count,
                                const std::function<VerificationReport(std::size_t)>& unit,
                                ExecPolicy policy = ExecPolicy::Parallel, bool fail_fast = false);

/// Convenience: a Failure if lhs != rhs.
std::optional<Failure> expect_equal(const SparsePoly& lhs, const SparsePoly& rhs, std::string lhs_desc,
                                    std::string rhs_desc);

}  // namespace wak
