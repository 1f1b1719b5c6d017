#pragma once

#include <map>
#include <string>
#include <vector>

#include "fidsim/observables.hpp"

namespace fidsim {

// floats serialized with 17 significant digits (round-trip exact)
std::string format_double(double x);

struct CsvDoc {
    std::map<std::string, std::string> meta; // from "# key = value" comments
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path,
               const std::map<std::string, std::string>& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

CsvDoc read_csv(const std::string& path);

// ErrorCurve round-trip; metadata carries the curve context so analysis
// tools can run from the file alone
void write_error_curve(const std::string& path, const ErrorCurve& curve,
                       const std::string& config_hash,
                       const std::map<std::string, std::string>& extra = {});

ErrorCurve read_error_curve(const std::string& path);

} // namespace fidsim
