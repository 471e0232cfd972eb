#include "szego/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "szego/types.hpp"

namespace szego {

std::string format_number(double x) {
    char buf[40];
    // Shortest representation that survives the round trip.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

std::string complex_json(cd z) {
    return "[" + format_number(z.real()) + ", " + format_number(z.imag()) + "]";
}

std::string blaschke_body(const BlaschkeProduct& b) {
    std::string out = "{\"angle\": " + format_number(b.angle) + ", \"zeros\": [";
    for (int j = 0; j < b.degree(); ++j) {
        if (j) out += ", ";
        out += complex_json(b.zeros[j]);
    }
    out += "]}";
    return out;
}

nlohmann::json parse(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw validation_error("malformed JSON");
    return j;
}

cd read_complex(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw validation_error("expected a complex number as [re, im]");
    return cd{j[0].get<double>(), j[1].get<double>()};
}

BlaschkeProduct read_blaschke(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("angle") || !j.contains("zeros") ||
        !j["angle"].is_number() || !j["zeros"].is_array())
        throw validation_error("blaschke JSON needs \"angle\" and \"zeros\"");
    std::vector<cd> zeros;
    for (const auto& z : j["zeros"]) zeros.push_back(read_complex(z));
    return make_blaschke(j["angle"].get<double>(), std::move(zeros));
}

} // namespace

std::string to_json(const HardySymbol& u) {
    std::string out = "{\"coeffs\": [";
    for (int k = 0; k < u.n_modes(); ++k) {
        out += k ? ",\n  " : "\n  ";
        out += complex_json(u.coeffs[k]);
    }
    out += "\n]}\n";
    return out;
}

std::string to_json(const BlaschkeProduct& b) { return blaschke_body(b) + "\n"; }

std::string to_json(const SpectralData& sd) {
    std::string out = "{\"s\": [";
    for (int r = 0; r < sd.n(); ++r) {
        if (r) out += ", ";
        out += format_number(sd.s[r]);
    }
    out += "],\n \"psi\": [";
    for (int r = 0; r < sd.n(); ++r) {
        out += r ? ",\n  " : "\n  ";
        out += blaschke_body(sd.psi[r]);
    }
    out += "\n]}\n";
    return out;
}

HardySymbol symbol_from_json(const std::string& text) {
    nlohmann::json j = parse(text);
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw validation_error("symbol JSON needs a \"coeffs\" array");
    std::vector<cd> coeffs;
    for (const auto& c : j["coeffs"]) coeffs.push_back(read_complex(c));
    return make_symbol(coeffs);
}

BlaschkeProduct blaschke_from_json(const std::string& text) {
    return read_blaschke(parse(text));
}

SpectralData spectral_from_json(const std::string& text) {
    nlohmann::json j = parse(text);
    if (!j.is_object() || !j.contains("s") || !j.contains("psi") ||
        !j["s"].is_array() || !j["psi"].is_array())
        throw validation_error("spectral JSON needs \"s\" and \"psi\" arrays");
    SpectralData sd;
    for (const auto& v : j["s"]) {
        if (!v.is_number()) throw validation_error("\"s\" entries must be numbers");
        sd.s.push_back(v.get<double>());
    }
    for (const auto& b : j["psi"]) sd.psi.push_back(read_blaschke(b));
    validate(sd);
    return sd;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += '\n';
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) throw validation_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw validation_error("cannot rename onto " + path);
    }
}

} // namespace szego
