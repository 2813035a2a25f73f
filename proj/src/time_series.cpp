#include "lowdefault/time_series.hpp"

#include <string>

#include "lowdefault/errors.hpp"

namespace lowdefault {

DefaultTimeSeries::DefaultTimeSeries(std::vector<YearRecord> rows) : rows_(std::move(rows))
{
    if (rows_.empty())
        throw ValidationError("time series must contain at least one year");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const YearRecord& row = rows_[i];
        const std::string where = "year " + std::to_string(row.year) + ": ";
        if (row.pool_size <= 0)
            throw ValidationError(where + "pool size must be positive");
        if (row.defaults < 0)
            throw ValidationError(where + "defaults must be non-negative");
        if (row.defaults >= row.pool_size)
            throw ValidationError(where + "defaults must be less than pool size");
        if (i > 0 && row.year == rows_[i - 1].year)
            throw ValidationError(where + "duplicate year");
        if (i > 0 && row.year != rows_[i - 1].year + 1)
            throw ValidationError(where + "years must increase by one without gaps");
    }
}

std::int64_t DefaultTimeSeries::obligor_years() const
{
    std::int64_t total = 0;
    for (const YearRecord& row : rows_)
        total += row.pool_size;
    return total;
}

std::int64_t DefaultTimeSeries::total_defaults() const
{
    std::int64_t total = 0;
    for (const YearRecord& row : rows_)
        total += row.defaults;
    return total;
}

double DefaultTimeSeries::naive_pd() const
{
    return static_cast<double>(total_defaults()) / static_cast<double>(obligor_years());
}

}  // namespace lowdefault
