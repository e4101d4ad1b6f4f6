#pragma once

/*
 * io.hpp — persistence and reproducibility surface.
 *
 * Every output file carries the digest of the run manifest that produced it;
 * the digest covers the deterministic invocation data (tool, version,
 * command, arguments, configuration echo, input digests) and excludes wall
 * clock, so identical invocations produce identical bytes at thread count 1.
 * Floating point is formatted with 17 significant digits (exact round trip).
 * Exact rationals appear as canonical "n/d" strings.
 */

#include <map>
#include <string>
#include <vector>

#include "filament/evolve.hpp"
#include "filament/field.hpp"
#include "filament/lattice.hpp"
#include "filament/solver.hpp"
#include "filament/travel.hpp"

namespace filament::io {

inline constexpr const char* kToolName = "filament-waves";
inline constexpr const char* kToolVersion = "0.1.0";

// Canonical float formatting: shortest-exact is not used on purpose, a fixed
// "%.17g" keeps files byte-stable across writers.
std::string fmt(double v);

struct RunManifest {
    std::string command;
    std::vector<std::string> args;
    std::map<std::string, std::string> config;  // flat key=value echo
    std::map<std::string, std::string> inputs;  // path -> sha256
    std::map<std::string, std::string> outputs; // path -> sha256 (not in digest)
    double wall_clock_sec = 0.0;                // not in digest

    std::string digest() const;
    void write(const std::string& path) const;
};

std::string sha256_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

// CSV with a manifest-digest comment line above the header row.
class CsvWriter {
  public:
    CsvWriter(std::string digest, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& body() const { return body_; }
    void write(const std::string& path) const;

  private:
    std::string body_;
    size_t columns_;
};

// Field snapshot: self-describing text document with jmax, kmax, symmetry tag
// and records (j, k, re_x, im_x, re_y, im_y) over the half-lattice j > 0 plus
// (j = 0, k >= 0); reality reconstructs the rest. All-zero records are
// omitted.
void save_field(const std::string& path, const field::FourierField& u,
                const std::string& manifest_digest);
field::FourierField load_field(const std::string& path);

// period metadata (seconds of physical time for one orbit) is optional and
// lets `evolve --periods N` run on branch-emitted states.
void save_state(const std::string& path, const evolve::EvolutionState& s,
                const std::string& manifest_digest, double period = 0.0);
evolve::EvolutionState load_state(const std::string& path);
double load_state_period(const std::string& path);  // 0 when absent

void save_profile(const std::string& path, const travel::TravelProfile& p,
                  const std::string& manifest_digest);
travel::TravelProfile load_profile(const std::string& path);

}  // namespace filament::io
