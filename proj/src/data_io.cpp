#include "lowdefault/data_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lowdefault/errors.hpp"

namespace lowdefault {
namespace {

constexpr std::string_view kHeader = "year,pool_size,defaults";

std::string_view trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

int parse_field(std::string_view field, std::size_t line, const char* column)
{
    field = trim(field);
    int value = 0;
    const auto [end, error] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || error != std::errc() || end != field.data() + field.size())
        throw ParseError(line, std::string("column '") + column + "' is not an integer: '"
                                   + std::string(field) + "'");
    return value;
}

const std::vector<YearRecord>& fictitious_rows()
{
    static const std::vector<YearRecord> rows{
        {2003, 125, 0}, {2004, 125, 0}, {2005, 125, 0}, {2006, 125, 0},
        {2007, 125, 0}, {2008, 125, 0}, {2009, 125, 0}, {2010, 125, 1},
    };
    return rows;
}

const std::vector<YearRecord>& investment_grade_rows()
{
    static const std::vector<YearRecord> rows{
        {1990, 1492, 0}, {1991, 1543, 1},  {1992, 1624, 0}, {1993, 1731, 0},  {1994, 1888, 0},
        {1995, 2012, 0}, {1996, 2209, 0},  {1997, 2412, 0}, {1998, 2593, 1},  {1999, 2742, 1},
        {2000, 2908, 4}, {2001, 2994, 4},  {2002, 3128, 14}, {2003, 3015, 0}, {2004, 2977, 0},
        {2005, 3025, 2}, {2006, 3082, 0},  {2007, 3108, 0}, {2008, 3133, 14}, {2009, 3048, 11},
        {2010, 2966, 2},
    };
    return rows;
}

}  // namespace

DefaultTimeSeries parse_csv(std::string_view content)
{
    std::vector<YearRecord> rows;
    bool header_seen = false;
    std::size_t line_number = 0;
    while (!content.empty()) {
        ++line_number;
        const auto newline = content.find('\n');
        std::string_view line = content.substr(0, newline);
        content = newline == std::string_view::npos ? std::string_view{} : content.substr(newline + 1);
        if (line_number == 1 && line.starts_with("\xEF\xBB\xBF"))
            line.remove_prefix(3);
        line = trim(line);
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != kHeader)
                throw ParseError(line_number, "expected header '" + std::string(kHeader) + "'");
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (fields.size() != 3)
            throw ParseError(line_number,
                             "expected 3 columns, found " + std::to_string(fields.size()));
        rows.push_back({parse_field(fields[0], line_number, "year"),
                        parse_field(fields[1], line_number, "pool_size"),
                        parse_field(fields[2], line_number, "defaults")});
    }
    if (!header_seen)
        throw ParseError(line_number == 0 ? 1 : line_number, "missing header");
    return DefaultTimeSeries(std::move(rows));
}

std::string serialize_csv(const DefaultTimeSeries& series)
{
    std::string out(kHeader);
    out += '\n';
    for (const YearRecord& row : series.rows()) {
        out += std::to_string(row.year) + ',' + std::to_string(row.pool_size) + ','
               + std::to_string(row.defaults) + '\n';
    }
    return out;
}

DefaultTimeSeries read_csv_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

DatasetRecord builtin_dataset(std::string_view name)
{
    if (name == "fictitious")
        return {"fictitious", "Fictitious default data", DefaultTimeSeries(fictitious_rows()),
                "Fictitious low default portfolio: 125 borrowers per year, one default in 2010"};
    if (name == "moodys_investment_grade")
        return {"moodys_investment_grade", "Moody's Investment Grade",
                DefaultTimeSeries(investment_grade_rows()),
                "Moody's Investors Service (2011), Corporate Default and Recovery Rates, "
                "1920-2010, Exhibits 17 and 42"};
    throw UnknownDatasetError("unknown dataset '" + std::string(name) + "'");
}

std::vector<std::string> builtin_dataset_names()
{
    return {"fictitious", "moodys_investment_grade"};
}

std::vector<std::string> dataset_listing()
{
    std::vector<std::string> lines;
    for (const std::string& name : builtin_dataset_names()) {
        const DatasetRecord record = builtin_dataset(name);
        const auto defaults = record.series.total_defaults();
        lines.push_back(name + " (T=" + std::to_string(record.series.periods()) + ", "
                        + std::to_string(record.series.obligor_years()) + " obligor-years, "
                        + std::to_string(defaults) + (defaults == 1 ? " default)" : " defaults)"));
    }
    return lines;
}

}  // namespace lowdefault
