#pragma once

// Text formatting shared by the commands. Doubles are written with 17
// significant digits and a '.' decimal point so every value round-trips.

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qfridge::cli {

std::string format_double(double v);

/// Empty string for an absent value.
std::string format_optional(const std::optional<double>& v);

/// "[a,b,...]" using format_double.
std::string format_array(std::span<const double> values);

/// Wraps a field in double quotes when it contains a comma or quote.
std::string csv_field(const std::string& text);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

/// JSON null for an absent value.
nlohmann::json json_optional(const std::optional<double>& v);

}  // namespace qfridge::cli
