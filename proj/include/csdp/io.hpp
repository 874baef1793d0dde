#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "info.hpp"
#include "model.hpp"

namespace csdp {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal that round-trips.
inline std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

// Zero-diagonal symmetric matrices go out as coordinate/symmetric with the
// strict lower triangle; anything else as array/symmetric.
inline void write_matrix_market(std::ostream& os, const Matrix& M) {
    if (M.rows() != M.cols()) throw IoError("only square matrices are supported");
    const Index n = M.rows();
    bool zero_diag = true;
    for (Index i = 0; i < n; ++i) zero_diag = zero_diag && M(i, i) == 0.0;
    if (zero_diag) {
        std::size_t nnz = 0;
        for (Index j = 0; j < n; ++j)
            for (Index i = j + 1; i < n; ++i) nnz += M(i, j) != 0.0;
        os << "%%MatrixMarket matrix coordinate real symmetric\n";
        os << n << ' ' << n << ' ' << nnz << '\n';
        for (Index j = 0; j < n; ++j)
            for (Index i = j + 1; i < n; ++i)
                if (M(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << format_double(M(i, j)) << '\n';
    } else {
        os << "%%MatrixMarket matrix array real symmetric\n";
        os << n << ' ' << n << '\n';
        for (Index j = 0; j < n; ++j)
            for (Index i = j; i < n; ++i) os << format_double(M(i, j)) << '\n';
    }
}

inline Matrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty Matrix Market stream");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    auto lower = [](std::string s) {
        for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (tag != "%%MatrixMarket" || lower(object) != "matrix") throw IoError("missing Matrix Market banner");
    if (field != "real" && field != "integer" && field != "pattern") throw IoError("unsupported field " + field);
    if (symmetry != "general" && symmetry != "symmetric") throw IoError("unsupported symmetry " + symmetry);
    do {
        if (!std::getline(is, line)) throw IoError("missing size line");
    } while (line.empty() || line[0] == '%');
    std::istringstream size(line);
    long rows = 0, cols = 0, nnz = 0;
    size >> rows >> cols;
    if (format == "coordinate") size >> nnz;
    if (!size || rows != cols || rows < 0) throw IoError("expected a square size line");
    Matrix M = Matrix::Zero(rows, cols);
    auto next_data = [&](std::istringstream& ls) {
        do {
            if (!std::getline(is, line)) throw IoError("truncated Matrix Market data");
        } while (line.empty() || line[0] == '%');
        ls.clear();
        ls.str(line);
    };
    std::istringstream ls;
    if (format == "coordinate") {
        for (long k = 0; k < nnz; ++k) {
            next_data(ls);
            long i = 0, j = 0;
            double v = 1.0;
            ls >> i >> j;
            if (field != "pattern") ls >> v;
            if (!ls || i < 1 || j < 1 || i > rows || j > cols) throw IoError("bad coordinate entry: " + line);
            M(i - 1, j - 1) = v;
            if (symmetry == "symmetric") M(j - 1, i - 1) = v;
        }
    } else if (format == "array") {
        if (field == "pattern") throw IoError("pattern arrays are not valid");
        for (long j = 0; j < cols; ++j)
            for (long i = symmetry == "symmetric" ? j : 0; i < rows; ++i) {
                next_data(ls);
                double v = 0.0;
                ls >> v;
                if (!ls) throw IoError("bad array entry: " + line);
                M(i, j) = v;
                if (symmetry == "symmetric") M(j, i) = v;
            }
    } else {
        throw IoError("unsupported format " + format);
    }
    return M;
}

inline void save_matrix_market(const std::string& path, const Matrix& M) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_matrix_market(f, M);
}

inline Matrix load_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    return read_matrix_market(f);
}

using Json = nlohmann::json;

inline Json to_json(const ModelSpec& s) {
    Json j = {{"kind", to_string(s.kind)}, {"n", s.n}, {"K", s.K}};
    if (s.kind == ModelKind::Gaussian) j["mu"] = s.mu;
    else {
        j["p"] = s.p;
        j["q"] = s.q;
    }
    if (s.kind == ModelKind::Sbm) j["r"] = s.r;
    return j;
}

inline ModelSpec model_spec_from_json(const Json& j) {
    try {
        ModelSpec s;
        s.kind = model_kind_from_string(j.at("kind").get<std::string>());
        s.n = j.at("n").get<int>();
        s.K = j.at("K").get<int>();
        s.mu = j.value("mu", 0.0);
        s.p = j.value("p", 0.0);
        s.q = j.value("q", 0.0);
        s.r = j.value("r", 0);
        s.validate();
        return s;
    } catch (const Json::exception& e) {
        throw IoError(std::string("bad model spec: ") + e.what());
    }
}

// Instance record: schema, spec, seed, truth (and SBM labels).
inline Json instance_record(const Instance& inst) {
    Json j = {{"schema", kSchemaVersion},
              {"spec", to_json(inst.spec)},
              {"seed", inst.seed},
              {"truth", inst.truth}};
    if (!inst.labels.empty()) j["labels"] = inst.labels;
    return j;
}

struct InstanceRecord {
    ModelSpec spec;
    std::uint64_t seed = 0;
    std::vector<int> truth;
    std::vector<int> labels;
};

inline InstanceRecord instance_record_from_json(const Json& j) {
    try {
        InstanceRecord r;
        if (j.value("schema", 0) != kSchemaVersion) throw IoError("unsupported schema version");
        r.spec = model_spec_from_json(j.at("spec"));
        r.seed = j.at("seed").get<std::uint64_t>();
        r.truth = j.at("truth").get<std::vector<int>>();
        if (j.contains("labels")) r.labels = j.at("labels").get<std::vector<int>>();
        return r;
    } catch (const Json::exception& e) {
        throw IoError(std::string("bad instance record: ") + e.what());
    }
}

inline Json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    try {
        return Json::parse(f);
    } catch (const Json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
}

inline Json num_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json to_json(const ThresholdReport& rep) {
    Json entries = Json::array();
    for (const auto& c : rep.entries) {
        entries.push_back({{"id", c.id},
                           {"side", to_string(c.side)},
                           {"lhs", num_or_null(c.lhs)},
                           {"rhs", num_or_null(c.rhs)},
                           {"margin", num_or_null(c.margin)},
                           {"satisfied", c.satisfied},
                           {"applicable", c.applicable},
                           {"regime", c.regime},
                           {"note", c.note}});
    }
    Json j = {{"schema", kSchemaVersion}, {"spec", to_json(rep.spec)}, {"entries", entries}};
    if (rep.spec.kind != ModelKind::Gaussian) j["kappa"] = rep.kappa;
    return j;
}

// One column per condition: "margin:<id>".
inline std::vector<std::pair<std::string, double>> csv_margins(const ThresholdReport& rep) {
    std::vector<std::pair<std::string, double>> cols;
    for (const auto& c : rep.entries) cols.emplace_back("margin:" + c.id, c.margin);
    return cols;
}

}  // namespace csdp
