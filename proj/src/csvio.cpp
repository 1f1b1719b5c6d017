#include "fidsim/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fidsim/errors.hpp"

namespace fidsim {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

double meta_double(const CsvDoc& doc, const std::string& key) {
    auto it = doc.meta.find(key);
    if (it == doc.meta.end()) throw InputError("csv missing metadata key: " + key);
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw InputError("csv metadata " + key + " is not a number: " + it->second);
    }
}

} // namespace

void write_csv(const std::string& path,
               const std::map<std::string, std::string>& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open for writing: " + path);
    for (const auto& [k, v] : meta) f << "# " << k << " = " << v << "\n";
    for (size_t i = 0; i < header.size(); ++i)
        f << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw InputError("csv row width mismatch in " + path);
        for (size_t i = 0; i < row.size(); ++i)
            f << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
    if (!f) throw InputError("write failed: " + path);
}

CsvDoc read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open: " + path);
    CsvDoc doc;
    std::string line;
    bool have_header = false;
    while (std::getline(f, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::string body = trim(t.substr(1));
            auto eq = body.find('=');
            if (eq != std::string::npos)
                doc.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            continue;
        }
        auto cells = split_commas(t);
        if (!have_header) {
            doc.header = cells;
            have_header = true;
        } else {
            if (cells.size() != doc.header.size())
                throw InputError("csv row width mismatch in " + path);
            doc.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw InputError("csv has no header row: " + path);
    return doc;
}

void write_error_curve(const std::string& path, const ErrorCurve& curve,
                       const std::string& config_hash,
                       const std::map<std::string, std::string>& extra) {
    std::map<std::string, std::string> meta = extra;
    meta["config_hash"] = config_hash;
    meta["sweep_variable"] = curve.sweep_variable;
    const CurveContext& c = curve.ctx;
    meta["horizon"] = format_double(c.horizon);
    meta["delta0"] = format_double(c.delta0);
    meta["delta"] = format_double(c.delta);
    meta["J"] = format_double(c.bigJ);
    meta["sigma2"] = format_double(c.sigma2);
    meta["n_antiparallel"] = std::to_string(c.n_ud);
    meta["n_parallel"] = std::to_string(c.n_uu);
    meta["n_links"] = std::to_string(c.n_c);
    meta["seed"] = std::to_string(c.seed);
    meta["convention"] = convention_name(c.convention);

    std::vector<std::string> header = {curve.sweep_variable, "E_mean", "E_stderr",
                                       "realizations"};
    std::vector<std::vector<std::string>> rows;
    rows.reserve(curve.points.size());
    for (const auto& p : curve.points)
        rows.push_back({format_double(p.x), format_double(p.e_mean),
                        format_double(p.e_stderr), std::to_string(p.realizations)});
    write_csv(path, meta, header, rows);
}

ErrorCurve read_error_curve(const std::string& path) {
    CsvDoc doc = read_csv(path);
    ErrorCurve curve;
    auto sv = doc.meta.find("sweep_variable");
    curve.sweep_variable = (sv != doc.meta.end()) ? sv->second
                                                  : (doc.header.empty() ? "x" : doc.header[0]);
    CurveContext& c = curve.ctx;
    c.horizon = meta_double(doc, "horizon");
    c.delta0 = meta_double(doc, "delta0");
    c.delta = meta_double(doc, "delta");
    c.bigJ = meta_double(doc, "J");
    c.sigma2 = meta_double(doc, "sigma2");
    c.n_ud = static_cast<int>(meta_double(doc, "n_antiparallel"));
    c.n_uu = static_cast<int>(meta_double(doc, "n_parallel"));
    auto links_it = doc.meta.find("n_links");
    c.n_c = (links_it != doc.meta.end()) ? std::stoi(links_it->second)
                                         : c.n_ud + c.n_uu;
    auto seed_it = doc.meta.find("seed");
    c.seed = (seed_it != doc.meta.end()) ? std::stoull(seed_it->second) : 0;
    auto conv = doc.meta.find("convention");
    c.convention = (conv != doc.meta.end()) ? convention_from_name(conv->second)
                                            : Convention::mean_log;

    if (doc.header.size() < 3) throw InputError("curve csv needs x,E_mean,E_stderr columns");
    for (const auto& row : doc.rows) {
        CurvePoint p;
        try {
            p.x = std::stod(row[0]);
            p.e_mean = std::stod(row[1]);
            p.e_stderr = std::stod(row[2]);
            p.realizations = doc.header.size() > 3 ? std::stoi(row[3]) : 0;
        } catch (const std::exception&) {
            throw InputError("curve csv has a non-numeric cell in " + path);
        }
        curve.points.push_back(p);
    }
    return curve;
}

} // namespace fidsim
