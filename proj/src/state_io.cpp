#include "markovscope/state_io.hpp"

#include <fstream>
#include <sstream>

namespace markovscope {

ordered_json matrix_to_json(const CMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(ordered_json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(what + ": expected a nonempty array of rows");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(j.size());
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ParseError(what + ": row " + std::to_string(i) + " does not have " +
                             std::to_string(n) + " entries");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& cell = row[static_cast<std::size_t>(k)];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number()) {
                throw ParseError(what + ": entry (" + std::to_string(i) + "," + std::to_string(k) +
                                 ") is not a [re, im] pair");
            }
            m(i, k) = Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

ordered_json state_to_json(const TripartiteState& s) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["dims"] = s.dims;
    j["matrix"] = matrix_to_json(s.rho);
    return j;
}

TripartiteState state_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("state file: expected a JSON object");
    if (!j.contains("dims")) throw ParseError("state file: missing \"dims\"");
    if (!j.contains("matrix")) throw ParseError("state file: missing \"matrix\"");
    const auto& jd = j["dims"];
    if (!jd.is_array() || jd.size() != 3 || !jd[0].is_number_integer() ||
        !jd[1].is_number_integer() || !jd[2].is_number_integer()) {
        throw ParseError("state file: \"dims\" must be three integers");
    }
    std::array<int, 3> dims{jd[0].get<int>(), jd[1].get<int>(), jd[2].get<int>()};
    CMatrix m = matrix_from_json(j["matrix"], "state file matrix");
    return make_tripartite_state(std::move(m), dims);
}

ordered_json markov_spec_to_json(const MarkovBlockSpec& spec) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["dim_a"] = spec.dim_a;
    j["dim_c"] = spec.dim_c;
    ordered_json blocks = ordered_json::array();
    for (const auto& b : spec.blocks) {
        ordered_json jb;
        jb["weight"] = b.weight;
        jb["dim_left"] = b.dim_left;
        jb["dim_right"] = b.dim_right;
        jb["rho_left"] = matrix_to_json(b.rho_left);
        jb["rho_right"] = matrix_to_json(b.rho_right);
        blocks.push_back(std::move(jb));
    }
    j["blocks"] = std::move(blocks);
    return j;
}

MarkovBlockSpec markov_spec_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("markov spec: expected a JSON object");
    for (const char* key : {"dim_a", "dim_c", "blocks"}) {
        if (!j.contains(key)) throw ParseError(std::string("markov spec: missing \"") + key + "\"");
    }
    MarkovBlockSpec spec;
    spec.dim_a = j["dim_a"].get<int>();
    spec.dim_c = j["dim_c"].get<int>();
    if (!j["blocks"].is_array() || j["blocks"].empty()) {
        throw ParseError("markov spec: \"blocks\" must be a nonempty array");
    }
    for (const auto& jb : j["blocks"]) {
        MarkovBlock b;
        for (const char* key : {"weight", "dim_left", "dim_right", "rho_left", "rho_right"}) {
            if (!jb.contains(key)) {
                throw ParseError(std::string("markov spec block: missing \"") + key + "\"");
            }
        }
        b.weight = jb["weight"].get<double>();
        b.dim_left = jb["dim_left"].get<int>();
        b.dim_right = jb["dim_right"].get<int>();
        b.rho_left = matrix_from_json(jb["rho_left"], "markov spec rho_left");
        b.rho_right = matrix_from_json(jb["rho_right"], "markov spec rho_right");
        spec.blocks.push_back(std::move(b));
    }
    return spec;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on " + path);
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(origin + ": " + e.what(), line, column);
    }
}

TripartiteState read_state_file(const std::string& path) {
    return state_from_json(parse_json_text(read_text_file(path), path));
}

void write_state_file(const std::string& path, const TripartiteState& s) {
    write_text_file(path, state_to_json(s).dump(2) + "\n");
}

MarkovBlockSpec read_markov_spec_file(const std::string& path) {
    return markov_spec_from_json(parse_json_text(read_text_file(path), path));
}

void write_markov_spec_file(const std::string& path, const MarkovBlockSpec& spec) {
    write_text_file(path, markov_spec_to_json(spec).dump(2) + "\n");
}

}  // namespace markovscope
