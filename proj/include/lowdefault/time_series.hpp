#pragma once

#include <cstdint>
#include <vector>

namespace lowdefault {

/// Pool size at the start of a year and defaults observed by its end.
struct YearRecord {
    int year;
    int pool_size;
    int defaults;

    bool operator==(const YearRecord&) const = default;
};

/// Annual default history (n_1, k_1), ..., (n_T, k_T).
class DefaultTimeSeries {
public:
    /// Throws ValidationError unless there is at least one row, years increase
    /// by exactly one, pool sizes are positive and 0 <= defaults < pool size.
    explicit DefaultTimeSeries(std::vector<YearRecord> rows);

    const std::vector<YearRecord>& rows() const { return rows_; }
    int periods() const { return static_cast<int>(rows_.size()); }
    std::int64_t obligor_years() const;
    std::int64_t total_defaults() const;
    /// total_defaults / obligor_years.
    double naive_pd() const;

    bool operator==(const DefaultTimeSeries&) const = default;

private:
    std::vector<YearRecord> rows_;
};

}  // namespace lowdefault
