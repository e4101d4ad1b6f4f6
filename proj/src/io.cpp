#include "filament/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "filament/sha256.hpp"

namespace filament::io {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunManifest::digest() const {
    std::string blob;
    blob += kToolName;
    blob += '\n';
    blob += kToolVersion;
    blob += '\n';
    blob += command;
    blob += '\n';
    // where results land (and which file supplied the config) does not
    // identify the computation; config contents are covered by the echo below
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out" || args[i] == "--config") {
            ++i;
            continue;
        }
        blob += args[i];
        blob += '\x1f';
    }
    blob += '\n';
    for (const auto& [k, v] : config) {
        blob += k;
        blob += '=';
        blob += v;
        blob += '\x1f';
    }
    blob += '\n';
    for (const auto& [k, v] : inputs) {
        blob += k;
        blob += ':';
        blob += v;
        blob += '\x1f';
    }
    return sha256_hex(blob);
}

void RunManifest::write(const std::string& path) const {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["args"] = args;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["digest"] = digest();
    j["wall_clock_sec"] = wall_clock_sec;
    write_text_file(path, j.dump(2) + "\n");
}

std::string sha256_file(const std::string& path) {
    return sha256_hex(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvWriter::CsvWriter(std::string digest, std::vector<std::string> header)
    : columns_(header.size()) {
    body_ = "# manifest_digest=" + digest + " tool=" + kToolName + "/" +
            kToolVersion + "\n";
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("csv row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, body_); }

namespace {

ordered_json symmetry_to_json(const std::optional<field::SymmetryClass>& tag) {
    if (!tag) return nullptr;
    ordered_json j;
    switch (tag->kind) {
        case field::SymmetryKind::none: j["kind"] = "none"; break;
        case field::SymmetryKind::standing: j["kind"] = "standing"; break;
        case field::SymmetryKind::traveling: j["kind"] = "traveling"; break;
    }
    j["k0"] = tag->k0;
    j["l0"] = tag->l0;
    j["j0"] = tag->j0;
    return j;
}

std::optional<field::SymmetryClass> symmetry_from_json(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    field::SymmetryClass cls;
    const std::string kind = j.at("kind");
    if (kind == "standing") cls.kind = field::SymmetryKind::standing;
    else if (kind == "traveling") cls.kind = field::SymmetryKind::traveling;
    else cls.kind = field::SymmetryKind::none;
    cls.k0 = j.at("k0");
    cls.l0 = j.at("l0");
    cls.j0 = j.at("j0");
    return cls;
}

}  // namespace

void save_field(const std::string& path, const field::FourierField& u,
                const std::string& manifest_digest) {
    ordered_json j;
    j["format"] = "fourier-field";
    j["manifest_digest"] = manifest_digest;
    j["jmax"] = u.jmax();
    j["kmax"] = u.kmax();
    j["symmetry"] = symmetry_to_json(u.tag);
    ordered_json records = ordered_json::array();
    for (long jj = 0; jj <= u.jmax(); ++jj) {
        for (long k = -u.kmax(); k <= u.kmax(); ++k) {
            if (jj == 0 && k < 0) continue;
            const auto x = u.at(0, jj, k);
            const auto y = u.at(1, jj, k);
            if (x == field::cd(0, 0) && y == field::cd(0, 0)) continue;
            records.push_back({jj, k, x.real(), x.imag(), y.real(), y.imag()});
        }
    }
    j["records"] = std::move(records);
    write_text_file(path, j.dump() + "\n");
}

field::FourierField load_field(const std::string& path) {
    const ordered_json j = ordered_json::parse(read_text_file(path));
    if (j.at("format") != "fourier-field")
        throw std::runtime_error(path + ": not a field snapshot");
    field::FourierField u(j.at("jmax").get<int>(), j.at("kmax").get<int>());
    u.tag = symmetry_from_json(j.at("symmetry"));
    for (const auto& rec : j.at("records")) {
        const long jj = rec.at(0), k = rec.at(1);
        u.set_pair(0, jj, k, field::cd(rec.at(2), rec.at(3)));
        u.set_pair(1, jj, k, field::cd(rec.at(4), rec.at(5)));
    }
    return u;
}

void save_state(const std::string& path, const evolve::EvolutionState& s,
                const std::string& manifest_digest, double period) {
    ordered_json j;
    j["format"] = "evolution-state";
    j["manifest_digest"] = manifest_digest;
    j["kmax"] = s.kmax;
    j["t"] = s.t;
    if (period > 0.0) j["period"] = period;
    ordered_json w1 = ordered_json::array(), w2 = ordered_json::array();
    for (size_t i = 0; i < s.w1_hat.size(); ++i) {
        w1.push_back({s.w1_hat[i].real(), s.w1_hat[i].imag()});
        w2.push_back({s.w2_hat[i].real(), s.w2_hat[i].imag()});
    }
    j["w1"] = std::move(w1);
    j["w2"] = std::move(w2);
    write_text_file(path, j.dump() + "\n");
}

evolve::EvolutionState load_state(const std::string& path) {
    const ordered_json j = ordered_json::parse(read_text_file(path));
    if (j.at("format") != "evolution-state")
        throw std::runtime_error(path + ": not an evolution state");
    evolve::EvolutionState s(j.at("kmax").get<int>());
    s.t = j.at("t");
    const auto& w1 = j.at("w1");
    const auto& w2 = j.at("w2");
    if (w1.size() != s.w1_hat.size() || w2.size() != s.w2_hat.size())
        throw std::runtime_error(path + ": coefficient count mismatch");
    for (size_t i = 0; i < s.w1_hat.size(); ++i) {
        s.w1_hat[i] = field::cd(w1[i].at(0), w1[i].at(1));
        s.w2_hat[i] = field::cd(w2[i].at(0), w2[i].at(1));
    }
    return s;
}

void save_profile(const std::string& path, const travel::TravelProfile& p,
                  const std::string& manifest_digest) {
    ordered_json j;
    j["format"] = "travel-profile";
    j["manifest_digest"] = manifest_digest;
    j["modes"] = p.modes;
    j["nu"] = p.nu;
    j["a"] = p.a;
    j["b"] = p.b;
    j["l"] = p.l;
    j["residual"] = p.residual;
    j["x"] = p.xc;
    j["y"] = p.yc;
    write_text_file(path, j.dump() + "\n");
}

double load_state_period(const std::string& path) {
    const ordered_json j = ordered_json::parse(read_text_file(path));
    return j.contains("period") ? j.at("period").get<double>() : 0.0;
}

travel::TravelProfile load_profile(const std::string& path) {
    const ordered_json j = ordered_json::parse(read_text_file(path));
    if (j.at("format") != "travel-profile")
        throw std::runtime_error(path + ": not a travel profile");
    travel::TravelProfile p;
    p.modes = j.at("modes");
    p.nu = j.at("nu");
    p.a = j.at("a");
    p.b = j.at("b");
    p.l = j.at("l");
    p.residual = j.at("residual");
    p.xc = j.at("x").get<std::vector<double>>();
    p.yc = j.at("y").get<std::vector<double>>();
    return p;
}

}  // namespace filament::io
