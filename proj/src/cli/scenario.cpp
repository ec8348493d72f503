#include "fbenn/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>

#include "json.hpp"

#include "fbenn/error.hpp"
#include "fbenn/solver.hpp"

namespace fbenn {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string where(const std::string& key, int line) {
    return "key '" + key + "' (line " + std::to_string(line) + ")";
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

class KeyValues {
public:
    explicit KeyValues(std::string_view text) {
        int line = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = std::min(text.find('\n', start), text.size());
            ++line;
            auto content = text.substr(start, end - start);
            start = end + 1;
            if (const auto hash = content.find('#'); hash != std::string_view::npos)
                content = content.substr(0, hash);
            content = trim(content);
            if (content.empty()) continue;
            const auto eq = content.find('=');
            if (eq == std::string_view::npos)
                throw Error(Errc::invalid_input,
                            "line " + std::to_string(line) + ": expected 'key = value'");
            const std::string key(trim(content.substr(0, eq)));
            if (entries_.count(key))
                throw Error(Errc::range_violation, where(key, line) + ": duplicate key");
            entries_[key] = Entry{std::string(trim(content.substr(eq + 1))), line, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

    const std::string& text(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw Error(Errc::missing_key, "key '" + key + "' is required");
        it->second.used = true;
        return it->second.value;
    }

    double number(const std::string& key) {
        const auto& v = text(key);
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
            fail(key, "'" + v + "' is not a finite number");
        return out;
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::size_t count(const std::string& key) {
        const double v = number(key);
        if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) fail(key, "must be a positive integer");
        return static_cast<std::size_t>(v);
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw Error(Errc::range_violation, where(key, line(key)) + ": " + why);
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_)
            if (!e.used) throw Error(Errc::unknown_key, where(key, e.line) + " is not recognised");
    }

private:
    std::map<std::string, Entry> entries_;
};

template <class E>
E choose(KeyValues& kv, const std::string& key, const std::vector<std::pair<std::string, E>>& options) {
    const auto v = lower(kv.text(key));
    for (const auto& [name, e] : options)
        if (v == name) return e;
    std::string list;
    for (const auto& [name, e] : options) list += (list.empty() ? "" : ", ") + name;
    kv.fail(key, "'" + v + "' is not one of " + list);
}

bool fbenn_family(Equation e) {
    return e == Equation::FBENN || e == Equation::NDE || e == Equation::BE;
}

ModelParams effective_params(const Scenario& s) {
    auto m = s.params;
    if (s.equation == Equation::NDE) m.p = 0.0;
    if (s.equation == Equation::BE) m.p = 1.0;
    return m;
}

std::string format(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::size_t steps_for(const Scenario& s) {
    return static_cast<std::size_t>(std::ceil(s.t_end / s.dt * (1.0 - 1e-12)));
}

std::vector<double> snapshot_times(const Scenario& s) {
    std::vector<double> t;
    for (std::size_t k = 0; k <= s.snapshots; ++k)
        t.push_back(s.t_end * static_cast<double>(k) / static_cast<double>(s.snapshots));
    return t;
}

Field initial_field(const Scenario& s, const ModelParams& m) {
    const auto& in = s.initial;
    switch (in.kind) {
    case InitialKind::ExpModes:
        if (s.equation == Equation::Diffusion) return superpose(in.modes, {m.alpha}, s.grid, 0.0);
        return transform(superpose(in.modes, {m.alpha}, s.grid, 0.0), m);
    case InitialKind::Gaussian:
        return Field::sample(s.grid, [&](double x) {
            const double r = (x - in.center) / in.width;
            return in.amplitude * std::exp(-r * r);
        });
    case InitialKind::TanhFront:
        return Field::sample(s.grid, [&](double x) {
            return in.phi1 + 0.5 * (in.phi2 - in.phi1) * (1.0 - std::tanh((x - in.center) / in.width));
        });
    case InitialKind::FromFile: {
        auto f = read_field_table(in.path);
        return f.at_time(0.0);
    }
    }
    throw Error(Errc::invalid_input, "unknown initial kind");
}

// Field of the transform pipeline at time t.
Field transform_at(const Scenario& s, const ModelParams& m, const Field& phi0, double t) {
    if (s.initial.kind == InitialKind::ExpModes)
        return transform(superpose(s.initial.modes, {m.alpha}, s.grid, t), m);
    return solve_fbenn_via_transform(phi0, m, t, m.b).at_time(t);
}

TravellingWave wave_of(const Scenario& s, const ModelParams& m) {
    const auto& w = s.wave;
    if (m.p == 1.0) return TravellingWave::burgers(w.phi1, w.phi2, m.alpha);
    if (m.p == 0.0) return TravellingWave::nde(w.u, m.alpha, w.c, w.C2);
    return TravellingWave::fractional(m.p, w.u, m.alpha, w.C, w.a);
}

void run_wave(const Scenario& s, const ModelParams& m, RunReport& r) {
    const auto tw = wave_of(s, m);
    r.fields.push_back(travelling_wave_field(tw, s.grid));
    if (!s.outputs.residuals) return;
    for (std::size_t level = 0, n = s.grid.n; level < 3; ++level, n = 2 * n - 1) {
        const auto g = Grid::span(s.grid.x0, s.grid.x_max(), n);
        r.wave_residuals.push_back({n, g.dx, travelling_wave_residual(tw, g)});
    }
    const auto& a = r.wave_residuals[r.wave_residuals.size() - 2];
    const auto& b = r.wave_residuals.back();
    if (a.residual > 0.0 && b.residual > 0.0) r.wave_order = std::log2(a.residual / b.residual);
}

void run_diffusion(const Scenario& s, const ModelParams& m, RunReport& r) {
    const DiffusionParams d{m.alpha};
    const auto w0 = initial_field(s, m);
    const auto at = [&](double t) {
        if (s.initial.kind == InitialKind::ExpModes) return superpose(s.initial.modes, d, s.grid, t);
        return heat_kernel_solve(w0, d, t);
    };
    for (double t : snapshot_times(s)) r.fields.push_back(t == 0.0 ? w0 : at(t));
    if (s.outputs.residuals) {
        const double t1 = std::max(0.0, s.t_end - s.dt);
        r.residual = diffusion_residual(t1 == 0.0 ? w0 : at(t1), at(s.t_end), d);
    }
}

void run_fbenn(const Scenario& s, const ModelParams& m, RunReport& r) {
    const auto phi0 = initial_field(s, m);
    const bool direct = s.pipeline != Pipeline::ViaTransform;
    const bool via = s.pipeline != Pipeline::Direct;

    Trajectory transformed;
    if (via)
        for (double t : snapshot_times(s)) transformed.push_back(t == 0.0 ? phi0 : transform_at(s, m, phi0, t));

    if (direct) {
        // The step is shortened so that every snapshot falls on a step.
        const std::size_t per = (steps_for(s) + s.snapshots - 1) / s.snapshots;
        const double dt = s.t_end / static_cast<double>(per * s.snapshots);
        IntegrateOptions opt;
        opt.record_every = per;
        if (s.initial.kind == InitialKind::ExpModes) {
            opt.boundary = [&](double t) {
                const auto f = transform_at(s, m, phi0, t);
                return std::make_pair(f.front(), f.back());
            };
        }
        std::optional<Field> prev;
        double worst = 0.0;
        if (s.outputs.residuals) {
            opt.on_step = [&](const Field& f) {
                if (prev) {
                    Trajectory pair;
                    pair.push_back(*prev);
                    pair.push_back(f);
                    worst = std::max(worst, trajectory_residual(pair, m));
                }
                prev = f;
            };
        }
        r.fields = integrate(phi0, m, s.t_end, dt, opt);
        if (s.outputs.residuals) r.residual = worst;
        if (via) {
            r.comparison = linf_interior(r.fields.back(), transformed.back());
            r.transform_fields = std::move(transformed);
        }
    } else {
        r.fields = std::move(transformed);
    }

    if (s.outputs.fit) {
        try {
            r.fit = asymptotic_profile_fit(r.fields, m);
        } catch (const Error& e) {
            r.fit_error = e.what();
        }
    }
}

json conservation_json(const ConservationReport& c) {
    return json{{"times", c.times},
                {"mass", c.mass},
                {"energy", c.energy},
                {"mass_drift", c.mass_drift},
                {"energy_monotone", c.energy_monotone},
                {"decay_conditions_hold", c.decay_ok}};
}

json summary_json(const RunReport& r) {
    json j{{"name", r.name}, {"p", r.p}};
    if (r.conservation) j["invariants"] = conservation_json(*r.conservation);
    if (r.residual) j["max_residual"] = *r.residual;
    if (!r.wave_residuals.empty()) {
        json rows = json::array();
        for (const auto& w : r.wave_residuals) rows.push_back({{"n", w.n}, {"dx", w.dx}, {"residual", w.residual}});
        j["wave_residuals"] = rows;
        j["wave_order"] = r.wave_order ? json(*r.wave_order) : json(nullptr);
    }
    if (r.comparison) j["comparison_linf"] = *r.comparison;
    if (r.fit) {
        j["asymptotic_fit"] = {{"exponent_x", r.fit->exponent_x},
                               {"exponent_t", r.fit->exponent_t},
                               {"reynolds", r.fit->reynolds},
                               {"foot", r.fit->foot},
                               {"ramp_length", r.fit->ramp_length}};
    } else if (!r.fit_error.empty()) {
        j["asymptotic_fit"] = {{"error", r.fit_error}};
    }
    return j;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + file.string());
    out << text;
    if (!out) throw Error(Errc::io_error, "failed writing " + file.string());
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    KeyValues kv(text);
    Scenario s;
    if (kv.has("name")) s.name = kv.text("name");
    if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
        kv.fail("name", "must be a non-empty file stem");

    s.equation = choose<Equation>(kv, "equation",
                                  {{"fbenn", Equation::FBENN},
                                   {"nde", Equation::NDE},
                                   {"be", Equation::BE},
                                   {"diffusion", Equation::Diffusion},
                                   {"travellingwave", Equation::TravellingWave}});
    const bool family = fbenn_family(s.equation);
    const bool wave = s.equation == Equation::TravellingWave;

    auto& m = s.params;
    m.alpha = kv.number("alpha");
    if (!(m.alpha > 0.0)) kv.fail("alpha", "must be positive");
    if (s.equation == Equation::FBENN || wave) {
        m.p = kv.number("p");
    } else if (kv.has("p")) {
        if (s.equation == Equation::Diffusion) kv.fail("p", "is not used by equation diffusion");
        const double fixed = s.equation == Equation::BE ? 1.0 : 0.0;
        if (kv.number("p") != fixed) kv.fail("p", "is fixed to " + format(fixed) + " by the equation");
        m.p = fixed;
    }
    if (s.equation == Equation::NDE) m.p = 0.0;
    if (s.equation == Equation::BE) m.p = 1.0;
    if (!(m.p >= 0.0 && m.p <= 1.0)) kv.fail("p", "must lie in [0, 1]");
    m.b = kv.number("b", 0.0);
    m.lam = kv.number("lambda", 1.0);
    if (!(m.lam > 0.0)) kv.fail("lambda", "must be positive");
    if (kv.has("side"))
        m.side = choose<Side>(kv, "side", {{"left", Side::Left}, {"right", Side::Right}});
    if (kv.has("terminal")) {
        const auto kind = lower(kv.text("terminal"));
        if (kind == "weyl" || kind == "unbounded") {
            m.terminal = Terminal::unbounded();
        } else if (kind == "periodic") {
            m.terminal = Terminal::periodic();
        } else if (kind == "finite") {
            m.terminal = Terminal::at(kv.number("terminal.a"));
        } else {
            kv.fail("terminal", "'" + kind + "' is not one of weyl, periodic, finite");
        }
    }

    const auto initial_key = std::string("initial");
    if (!wave) {
        s.initial.kind = choose<InitialKind>(kv, initial_key,
                                             {{"modes", InitialKind::ExpModes},
                                              {"gaussian", InitialKind::Gaussian},
                                              {"tanh", InitialKind::TanhFront},
                                              {"file", InitialKind::FromFile}});
    }
    auto& in = s.initial;
    if (!wave && in.kind == InitialKind::ExpModes) {
        for (const auto part : split(kv.text("initial.modes"), ';')) {
            const auto abc = split(part, ',');
            if (abc.size() != 3) kv.fail("initial.modes", "each mode needs 'a, b, c'");
            double v[3];
            for (int i = 0; i < 3; ++i) {
                const auto r = std::from_chars(abc[i].data(), abc[i].data() + abc[i].size(), v[i]);
                if (r.ec != std::errc() || r.ptr != abc[i].data() + abc[i].size() || !std::isfinite(v[i]))
                    kv.fail("initial.modes", "'" + std::string(abc[i]) + "' is not a finite number");
            }
            if (!(v[0] > 0.0)) kv.fail("initial.modes", "mode amplitudes must be positive");
            in.modes.push_back({v[0], v[1], v[2]});
        }
    }
    if (!wave && (in.kind == InitialKind::Gaussian || in.kind == InitialKind::TanhFront)) {
        in.center = kv.number("initial.center", 0.0);
        in.width = kv.number("initial.width", 1.0);
        if (!(in.width > 0.0)) kv.fail("initial.width", "must be positive");
    }
    if (!wave && in.kind == InitialKind::Gaussian) in.amplitude = kv.number("initial.amplitude");
    if (!wave && in.kind == InitialKind::TanhFront) {
        in.phi1 = kv.number("initial.phi1");
        in.phi2 = kv.number("initial.phi2");
    }

    if (!wave && in.kind == InitialKind::FromFile) {
        in.path = kv.text("initial.path");
        if (in.path.is_relative() && !base_dir.empty()) in.path = base_dir / in.path;
        Field f = [&] {
            try {
                return read_field_table(in.path);
            } catch (const Error& e) {
                kv.fail("initial.path", e.what());
            }
        }();
        s.grid = f.grid();
        const auto check = [&](const std::string& key, double expect) {
            if (kv.has(key) && kv.number(key) != expect) kv.fail(key, "does not match the grid of the file");
        };
        check("grid.x0", s.grid.x0);
        check("grid.dx", s.grid.dx);
        check("grid.n", static_cast<double>(s.grid.n));
    } else {
        const double x0 = kv.number("grid.x0");
        const double dx = kv.number("grid.dx");
        if (!(dx > 0.0)) kv.fail("grid.dx", "must be positive");
        const auto n = kv.count("grid.n");
        if (n < 8) kv.fail("grid.n", "must be at least 8");
        s.grid = Grid::make(x0, dx, n);
    }

    if (wave) {
        auto& w = s.wave;
        if (m.p == 1.0) {
            w.phi1 = kv.number("wave.phi1");
            w.phi2 = kv.number("wave.phi2");
        } else {
            w.u = kv.number("wave.u");
            if (m.p == 0.0) {
                w.c = kv.number("wave.c");
                w.C2 = kv.number("wave.C2", 0.0);
            } else {
                w.C = kv.number("wave.C");
                w.a = kv.number("wave.a");
                if (!(w.a < s.grid.x0)) kv.fail("wave.a", "must lie left of grid.x0");
            }
        }
    } else {
        s.t_end = kv.number("t_end");
        if (!(s.t_end > 0.0)) kv.fail("t_end", "must be positive");
        s.dt = kv.number("dt");
        if (!(s.dt > 0.0)) kv.fail("dt", "must be positive");
        if (kv.has("snapshots")) s.snapshots = kv.count("snapshots");
    }

    s.outputs.fields = s.outputs.invariants = true;
    if (kv.has("outputs")) {
        s.outputs = {};
        for (const auto item : split(kv.text("outputs"), ',')) {
            const auto v = lower(item);
            if (v == "fields") s.outputs.fields = true;
            else if (v == "invariants") s.outputs.invariants = true;
            else if (v == "residuals") s.outputs.residuals = true;
            else if (v == "fit") s.outputs.fit = true;
            else kv.fail("outputs", "'" + v + "' is not one of fields, invariants, residuals, fit");
        }
    }

    if (kv.has("pipeline")) {
        s.pipeline = choose<Pipeline>(kv, "pipeline",
                                      {{"direct", Pipeline::Direct},
                                       {"transform", Pipeline::ViaTransform},
                                       {"both", Pipeline::Both}});
        if (s.pipeline != Pipeline::Direct && !family)
            kv.fail("pipeline", "transform pipelines need equation FBENN, NDE or BE");
    }
    if (family && s.pipeline != Pipeline::ViaTransform) {
        const double limit = stability_limit(s.grid, m.alpha);
        if (s.dt > limit * (1.0 + 1e-9))
            kv.fail("dt", format(s.dt) + " exceeds the stability bound " + format(limit));
    }
    if (s.outputs.fit && !family) kv.fail("outputs", "fit needs equation FBENN, NDE or BE");
    kv.reject_unused();
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), file.parent_path());
}

RunReport run(const Scenario& scenario) {
    const auto start = std::chrono::steady_clock::now();
    const auto m = effective_params(scenario);
    RunReport r;
    r.name = scenario.name;
    r.p = m.p;
    switch (scenario.equation) {
    case Equation::TravellingWave: run_wave(scenario, m, r); break;
    case Equation::Diffusion: run_diffusion(scenario, m, r); break;
    default: run_fbenn(scenario, m, r); break;
    }
    if (scenario.outputs.invariants && scenario.equation != Equation::TravellingWave) {
        auto dm = m;
        // A diffusion field is its own gradient density: take the local order.
        if (scenario.equation == Equation::Diffusion) dm.p = 1.0;
        r.conservation = conservation_report(r.fields, dm);
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SweepReport sweep(const Scenario& scenario, const std::vector<double>& p_values) {
    if (scenario.equation != Equation::FBENN)
        throw Error(Errc::invalid_input, "sweep needs equation FBENN");
    if (p_values.empty()) throw Error(Errc::invalid_input, "sweep needs at least one p value");
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::range_violation, "key 'p': sweep value " + format(p) + " outside [0, 1]");

    std::vector<std::future<RunReport>> jobs;
    for (double p : p_values) {
        auto s = scenario;
        s.params.p = p;
        jobs.push_back(std::async(std::launch::async, [s] { return run(s); }));
    }
    SweepReport out;
    for (auto& j : jobs) out.runs.push_back(j.get());
    for (std::size_t i = 0; i + 1 < out.runs.size(); ++i)
        out.continuity.push_back(linf_interior(out.runs[i + 1].fields.back(), out.runs[i].fields.back()));
    return out;
}

std::string field_table(const Trajectory& traj) {
    std::string out = "x,t,phi\n";
    for (const auto& s : traj) {
        const auto& g = s.grid();
        const auto t = format(s.t());
        for (std::size_t i = 0; i < g.n; ++i) {
            out += format(g.x(i));
            out += ',';
            out += t;
            out += ',';
            out += format(s[i]);
            out += '\n';
        }
    }
    return out;
}

Field read_field_table(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + file.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,t,phi")
        throw Error(Errc::io_error, file.string() + ": header must be 'x,t,phi'");
    std::vector<double> xs, vs;
    double t_cur = 0.0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto parts = split(line, ',');
        double v[3];
        if (parts.size() != 3) throw Error(Errc::io_error, file.string() + ": row " + std::to_string(row) + " needs three columns");
        for (int k = 0; k < 3; ++k) {
            const auto r = std::from_chars(parts[k].data(), parts[k].data() + parts[k].size(), v[k]);
            if (r.ec != std::errc() || r.ptr != parts[k].data() + parts[k].size())
                throw Error(Errc::io_error, file.string() + ": row " + std::to_string(row) + " is not numeric");
        }
        if (xs.empty() || v[1] != t_cur) {
            xs.clear();
            vs.clear();
            t_cur = v[1];
        }
        xs.push_back(v[0]);
        vs.push_back(v[2]);
    }
    if (xs.size() < 2) throw Error(Errc::io_error, file.string() + ": needs at least two samples");

    // The grid spacing is recovered as the double that regenerates every x exactly.
    const auto n = xs.size();
    const double x0 = xs.front();
    const auto fits = [&](double dx) {
        for (std::size_t i = 0; i < n; ++i)
            if (x0 + static_cast<double>(i) * dx != xs[i]) return false;
        return true;
    };
    double dx = (xs.back() - x0) / static_cast<double>(n - 1);
    double lo = dx, hi = dx;
    for (int k = 0; k < 64 && !fits(dx); ++k) {
        lo = std::nextafter(lo, -INFINITY);
        hi = std::nextafter(hi, INFINITY);
        if (fits(lo)) dx = lo;
        else if (fits(hi)) dx = hi;
    }
    if (!fits(dx)) throw Error(Errc::io_error, file.string() + ": x is not a uniform grid");
    return Field(Grid::make(x0, dx, n), std::move(vs), t_cur);
}

std::vector<std::filesystem::path> write_outputs(const RunReport& report, const Scenario& scenario,
                                                 const std::filesystem::path& out_dir,
                                                 const std::string& stem_in) {
    const std::string stem = stem_in.empty() ? scenario.name : stem_in;
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> files;
    if (scenario.outputs.fields) {
        files.push_back(out_dir / (stem + "_fields.csv"));
        write_text(files.back(), field_table(report.fields));
        if (!report.transform_fields.empty()) {
            files.push_back(out_dir / (stem + "_transform_fields.csv"));
            write_text(files.back(), field_table(report.transform_fields));
        }
    }
    if (!report.wave_residuals.empty()) {
        std::string table = "n,dx,residual\n";
        for (const auto& w : report.wave_residuals)
            table += std::to_string(w.n) + "," + format(w.dx) + "," + format(w.residual) + "\n";
        files.push_back(out_dir / (stem + "_residuals.csv"));
        write_text(files.back(), table);
    }
    files.push_back(out_dir / (stem + "_summary.json"));
    write_text(files.back(), summary_json(report).dump(2) + "\n");
    return files;
}

std::filesystem::path write_continuity(const SweepReport& sw, const std::vector<double>& p_values,
                                       const Scenario& scenario, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::string table = "p_from,p_to,linf\n";
    for (std::size_t i = 0; i < sw.continuity.size(); ++i)
        table += format(p_values[i]) + "," + format(p_values[i + 1]) + "," + format(sw.continuity[i]) + "\n";
    const auto file = out_dir / (scenario.name + "_continuity.csv");
    write_text(file, table);
    return file;
}

std::string report_json(const RunReport& report) {
    auto j = summary_json(report);
    j["wall_ms"] = report.wall_ms;
    return j.dump(2);
}

}  // namespace fbenn
