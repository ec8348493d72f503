#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbenn/diagnostics.hpp"
#include "fbenn/diffusion.hpp"
#include "fbenn/field.hpp"
#include "fbenn/hopf_cole.hpp"

namespace fbenn {

enum class Equation { FBENN, NDE, BE, Diffusion, TravellingWave };
enum class InitialKind { ExpModes, Gaussian, TanhFront, FromFile };
enum class Pipeline { Direct, ViaTransform, Both };

struct Outputs {
    bool fields = false;
    bool invariants = false;
    bool residuals = false;
    bool fit = false;
};

struct InitialData {
    InitialKind kind = InitialKind::Gaussian;
    std::vector<ExpMode> modes;
    double center = 0.0;
    double width = 1.0;
    double amplitude = 1.0;
    double phi1 = 0.0;
    double phi2 = 1.0;
    std::filesystem::path path;
};

/// Profile constants for equation = TravellingWave; the branch follows p.
struct WaveData {
    double u = 1.0;
    double c = 1.0;
    double C = 0.0;
    double C2 = 0.0;
    double a = 0.0;
    double phi1 = 0.0;
    double phi2 = 1.0;
};

struct Scenario {
    std::string name = "scenario";
    Equation equation = Equation::FBENN;
    ModelParams params;
    Grid grid;
    InitialData initial;
    WaveData wave;
    double t_end = 0.0;
    double dt = 0.0;
    /// Number of recorded intervals between t = 0 and t_end.
    std::size_t snapshots = 1;
    Outputs outputs;
    Pipeline pipeline = Pipeline::Direct;
};

/// Parses flat "key = value" lines; '#' starts a comment. Relative initial.path values are
/// resolved against base_dir.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file);

struct WaveResidualRow {
    std::size_t n = 0;
    double dx = 0.0;
    double residual = 0.0;
};

struct RunReport {
    std::string name;
    double wall_ms = 0.0;
    double p = 0.0;
    /// Snapshots of the primary pipeline (direct unless only the transform runs).
    Trajectory fields;
    /// Transform snapshots when both pipelines run.
    Trajectory transform_fields;
    std::optional<ConservationReport> conservation;
    std::optional<double> residual;
    std::vector<WaveResidualRow> wave_residuals;
    std::optional<double> wave_order;
    /// Interior L-infinity distance between the pipelines at t_end; present iff pipeline = Both.
    std::optional<double> comparison;
    std::optional<AsymptoticFit> fit;
    std::string fit_error;
};

RunReport run(const Scenario& scenario);

struct SweepReport {
    std::vector<RunReport> runs;
    /// continuity[i] = interior max |phi(p_{i+1}) - phi(p_i)| at t_end.
    std::vector<double> continuity;
};

/// Runs the scenario once per p value on a worker pool.
SweepReport sweep(const Scenario& scenario, const std::vector<double>& p_values);

/// Writes the requested files and returns their paths. stem defaults to the scenario name.
std::vector<std::filesystem::path> write_outputs(const RunReport& report, const Scenario& scenario,
                                                 const std::filesystem::path& out_dir,
                                                 const std::string& stem = {});
std::filesystem::path write_continuity(const SweepReport& sweep, const std::vector<double>& p_values,
                                       const Scenario& scenario, const std::filesystem::path& out_dir);

/// Stdout document for a run (wall time included).
std::string report_json(const RunReport& report);

/// `x,t,phi` table, one row per sample, shortest round-trip decimals.
std::string field_table(const Trajectory& traj);
/// Reads the last time slice of a field table; the grid is recovered exactly.
Field read_field_table(const std::filesystem::path& file);

}  // namespace fbenn
