#include "vcsd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "vcsd/errors.hpp"
#include "vcsd/policies.hpp"

namespace vcsd {

void ServiceArea::zone_bounds(int zone, double& x0, double& y0, double& x1, double& y1) const {
    const int zx = zone % zones_x;
    const int zy = zone / zones_x;
    x0 = zx * zone_width();
    y0 = zy * zone_height();
    x1 = x0 + zone_width();
    y1 = y0 + zone_height();
}

int ServiceArea::zone_of(const Point& p) const {
    int zx = static_cast<int>(p.x / zone_width());
    int zy = static_cast<int>(p.y / zone_height());
    zx = std::clamp(zx, 0, zones_x - 1);
    zy = std::clamp(zy, 0, zones_y - 1);
    return zy * zones_x + zx;
}

ServiceArea ServiceArea::make_default(int n_active, std::uint64_t layout_seed) {
    ServiceArea area;
    std::vector<int> all(area.zone_count());
    std::iota(all.begin(), all.end(), 0);
    Rng rng(layout_seed);
    Rng layout = rng.split(0x1a70u);
    // Fisher-Yates prefix of size n_active.
    for (int i = 0; i < n_active && i < static_cast<int>(all.size()); ++i) {
        const std::size_t j = i + layout.index(all.size() - i);
        std::swap(all[i], all[j]);
    }
    area.active_zones.assign(all.begin(), all.begin() + std::min<int>(n_active, all.size()));
    std::sort(area.active_zones.begin(), area.active_zones.end());
    return area;
}

double DensityClass::nbar_z() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) acc += support[i] * probs[i];
    return acc;
}

DensityClass density_class(DensityLevel level) {
    DensityClass d;
    d.level = level;
    switch (level) {
        case DensityLevel::VeryLow:
            d.support = {0, 1, 2};
            d.probs = {0.5, 1.0 / 3.0, 1.0 / 6.0};
            d.L_default = 143.71;
            d.m_default = 2;
            break;
        case DensityLevel::Low:
            d.support = {0, 1, 2};
            d.probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
            d.L_default = 201.38;
            d.m_default = 2;
            break;
        case DensityLevel::Moderate:
            d.support = {0, 1, 2, 3};
            d.probs = {0.1, 0.4, 0.4, 0.1};
            d.L_default = 221.47;
            d.m_default = 3;
            break;
        case DensityLevel::High:
            d.support = {2, 3, 4, 5};
            d.probs = {0.1, 0.4, 0.4, 0.1};
            d.L_default = 195.54;
            d.m_default = 7;
            break;
        case DensityLevel::VeryHigh:
            d.support = {4, 5, 6, 7};
            d.probs = {0.1, 0.4, 0.4, 0.1};
            d.L_default = 187.29;
            d.m_default = 11;
            break;
    }
    return d;
}

const char* density_name(DensityLevel level) {
    switch (level) {
        case DensityLevel::VeryLow: return "very-low";
        case DensityLevel::Low: return "low";
        case DensityLevel::Moderate: return "moderate";
        case DensityLevel::High: return "high";
        case DensityLevel::VeryHigh: return "very-high";
    }
    return "?";
}

std::optional<DensityLevel> parse_density(const std::string& name) {
    for (DensityLevel l : {DensityLevel::VeryLow, DensityLevel::Low, DensityLevel::Moderate,
                           DensityLevel::High, DensityLevel::VeryHigh}) {
        if (name == density_name(l)) return l;
    }
    return std::nullopt;
}

const char* variability_name(Variability u) {
    switch (u) {
        case Variability::Low: return "low";
        case Variability::Moderate: return "moderate";
        case Variability::High: return "high";
    }
    return "?";
}

std::optional<Variability> parse_variability(const std::string& name) {
    for (Variability u : {Variability::Low, Variability::Moderate, Variability::High}) {
        if (name == variability_name(u)) return u;
    }
    return std::nullopt;
}

void InstanceSpec::validate() const {
    if (Q <= 0.0) throw UsageError("vehicle capacity Q must be positive");
    if (m < 1) throw UsageError("fleet size m must be at least 1");
    if (L <= 0.0) throw UsageError("duration limit L must be positive");
    if (area.depot.x < 0 || area.depot.x > area.width || area.depot.y < 0 ||
        area.depot.y > area.height) {
        throw UsageError("depot outside the service area");
    }
    if (kind == InstanceKind::VrpsdFixed && fixed_customers.empty())
        throw UsageError("VRPSD spec requires a fixed customer list");
    if (kind == InstanceKind::VcsdGenerated && density.support.empty())
        throw UsageError("VCSD spec requires a density class");
    if (kind == InstanceKind::VcsdGenerated) {
        double p = 0.0;
        for (double q : density.probs) p += q;
        if (std::abs(p - 1.0) > 1e-12) throw UsageError("density probabilities must sum to 1");
        if (density.support.size() != density.probs.size())
            throw UsageError("density support/probs size mismatch");
    }
    for (int z : area.active_zones) {
        if (z < 0 || z >= area.zone_count()) throw UsageError("active zone index out of range");
    }
}

CustomerRealization sample_customers(const InstanceSpec& spec, Rng& rng) {
    if (spec.kind != InstanceKind::VcsdGenerated)
        throw UsageError("sample_customers requires a VCSD spec");
    CustomerRealization out;
    int id = 0;
    for (int z : spec.area.active_zones) {
        const int count = spec.density.support[rng.discrete(spec.density.probs)];
        double x0, y0, x1, y1;
        spec.area.zone_bounds(z, x0, y0, x1, y1);
        for (int i = 0; i < count; ++i) {
            Customer c;
            c.id = id++;
            c.loc.x = x0 + rng.uniform() * (x1 - x0);
            c.loc.y = y0 + rng.uniform() * (y1 - y0);
            c.dbar = 5.0 * (1 + rng.uniform_int(0, 2));  // {5, 10, 15}
            out.customers.push_back(c);
        }
    }
    return out;
}

void vrpsd_demand_distribution(double dbar, Variability u, std::vector<double>& values,
                               std::vector<double>& probs) {
    switch (u) {
        case Variability::Low:
            values = {dbar / 2.0, dbar, 1.5 * dbar};
            probs = {0.05, 0.9, 0.05};
            break;
        case Variability::Moderate:
            values = {0.0, dbar / 2.0, dbar, 1.5 * dbar, 2.0 * dbar};
            probs = {0.05, 0.15, 0.6, 0.15, 0.05};
            break;
        case Variability::High:
            values = {0.0, dbar / 2.0, dbar, 1.5 * dbar, 2.0 * dbar};
            probs = {0.2, 0.2, 0.2, 0.2, 0.2};
            break;
    }
}

double sample_demand(double dbar, const InstanceSpec& spec, Rng& rng) {
    if (spec.kind == InstanceKind::VcsdGenerated) {
        // Uniform on dbar +- 5; the dbar = 5 case narrows to {1..9} to avoid zero demand.
        const int spread = dbar == 5.0 ? 4 : 5;
        return dbar + rng.uniform_int(-spread, spread);
    }
    std::vector<double> values, probs;
    vrpsd_demand_distribution(dbar, spec.variability, values, probs);
    return values[rng.discrete(probs)];
}

DemandScenario sample_demands(const CustomerRealization& realization, const InstanceSpec& spec,
                              Rng& rng) {
    DemandScenario out;
    out.realized.reserve(realization.customers.size());
    for (const Customer& c : realization.customers)
        out.realized.push_back(sample_demand(c.dbar, spec, rng));
    return out;
}

CustomerRealization fixed_realization(const InstanceSpec& spec) {
    if (spec.kind != InstanceKind::VrpsdFixed)
        throw UsageError("fixed_realization requires a VRPSD spec");
    CustomerRealization out;
    int id = 0;
    for (const FixedCustomer& fc : spec.fixed_customers)
        out.customers.push_back({id++, fc.loc, fc.dbar});
    return out;
}

int vehicles_for_density(double nbar_z, double filling_rate, double Q_ref, int zone_count,
                         double mean_expected_demand) {
    if (nbar_z <= 0.0 || filling_rate <= 0.0 || Q_ref <= 0.0 || zone_count <= 0 ||
        mean_expected_demand <= 0.0) {
        throw UsageError("vehicles_for_density arguments must be positive");
    }
    return static_cast<int>(
        std::ceil(nbar_z * zone_count * mean_expected_demand / (filling_rate * Q_ref)));
}

double calibrate_duration_limit(const InstanceSpec& spec, int n_samples, Rng& rng) {
    if (spec.kind != InstanceKind::VcsdGenerated)
        throw UsageError("calibrate_duration_limit requires a VCSD spec");
    InstanceSpec relaxed = spec;
    relaxed.L = 1e15;  // effectively unconstrained
    relaxed.Q = 75.0;
    GreedyPolicy gp;
    double travel_sum = 0.0;
    long vehicle_count = 0;
    for (int s = 0; s < n_samples; ++s) {
        Rng trial = rng.split(0xca1u, static_cast<std::uint64_t>(s));
        CustomerRealization real = sample_customers(relaxed, trial);
        DemandScenario dem = sample_demands(real, relaxed, trial);
        EpisodeLog log = run_episode(gp, real, dem, relaxed, trial);
        for (double t : log.vehicle_travel) travel_sum += t;
        vehicle_count += relaxed.m;
    }
    if (vehicle_count == 0) return 0.0;
    return 0.75 * travel_sum / static_cast<double>(vehicle_count);
}

std::pair<CustomerRealization, Point> load_solomon(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open Solomon file: " + path);
    CustomerRealization out;
    Point depot;
    bool have_depot = false;
    std::string line;
    int line_no = 0;
    int next_id = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::vector<std::string> tok;
        std::string t;
        while (ss >> t) tok.push_back(t);
        if (tok.empty()) continue;
        // Customer rows are 7 numeric columns: id x y demand ready due service.
        if (tok.size() != 7) continue;
        bool numeric = true;
        for (const std::string& s : tok) {
            char* end = nullptr;
            std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0') { numeric = false; break; }
        }
        if (!numeric) continue;
        char* end = nullptr;
        const long id = std::strtol(tok[0].c_str(), &end, 10);
        if (*end != '\0') throw ParseError("non-integer customer id '" + tok[0] + "'", line_no);
        const double x = std::strtod(tok[1].c_str(), nullptr);
        const double y = std::strtod(tok[2].c_str(), nullptr);
        const double d = std::strtod(tok[3].c_str(), nullptr);
        if (id == 0) {
            depot = {x, y};
            have_depot = true;
        } else {
            out.customers.push_back({next_id++, {x, y}, d});
        }
    }
    if (!have_depot) throw ParseError("Solomon file has no depot row (id 0)", line_no);
    if (n > static_cast<int>(out.customers.size()))
        throw UsageError("requested " + std::to_string(n) + " customers but file has only " +
                         std::to_string(out.customers.size()));
    out.customers.resize(n);
    return {out, depot};
}

namespace {

constexpr const char* kInstanceMagic = "vcsd-instance";
constexpr const char* kScenarioMagic = "vcsd-scenarios";
constexpr int kSchemaVersion = 1;

void put_double(std::ostream& os, double v) {
    os << std::setprecision(17) << v;
}

struct KvReader {
    std::ifstream in;
    int line_no = 0;

    explicit KvReader(const std::string& path) : in(path) {
        if (!in) throw IoError("cannot open file: " + path);
    }

    bool next(std::string& key, std::istringstream& rest) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            rest = std::istringstream(line);
            if (rest >> key) return true;
        }
        return false;
    }
};

void check_header(KvReader& r, const char* magic) {
    std::string key;
    std::istringstream rest;
    if (!r.next(key, rest) || key != magic)
        throw ParseError(std::string("expected '") + magic + "' header", r.line_no);
    int version = -1;
    rest >> version;
    if (version != kSchemaVersion)
        throw ParseError("unsupported schema version " + std::to_string(version), r.line_no);
}

}  // namespace

void save_instance(const InstanceSpec& spec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write file: " + path);
    os << kInstanceMagic << ' ' << kSchemaVersion << '\n';
    os << "kind " << (spec.kind == InstanceKind::VcsdGenerated ? "vcsd" : "vrpsd") << '\n';
    os << "area ";
    put_double(os, spec.area.width); os << ' ';
    put_double(os, spec.area.height); os << '\n';
    os << "depot ";
    put_double(os, spec.area.depot.x); os << ' ';
    put_double(os, spec.area.depot.y); os << '\n';
    os << "zones " << spec.area.zones_x << ' ' << spec.area.zones_y << '\n';
    os << "active " << spec.area.active_zones.size();
    for (int z : spec.area.active_zones) os << ' ' << z;
    os << '\n';
    if (spec.kind == InstanceKind::VcsdGenerated) {
        os << "density " << density_name(spec.density.level) << '\n';
    } else {
        os << "variability " << variability_name(spec.variability) << '\n';
        os << "customers " << spec.fixed_customers.size() << '\n';
        for (const FixedCustomer& c : spec.fixed_customers) {
            os << "c ";
            put_double(os, c.loc.x); os << ' ';
            put_double(os, c.loc.y); os << ' ';
            put_double(os, c.dbar); os << '\n';
        }
    }
    os << "Q "; put_double(os, spec.Q); os << '\n';
    os << "m " << spec.m << '\n';
    os << "L "; put_double(os, spec.L); os << '\n';
    os << "seed " << spec.seed << '\n';
    if (!os) throw IoError("write failed: " + path);
}

InstanceSpec load_instance(const std::string& path) {
    KvReader r(path);
    check_header(r, kInstanceMagic);
    InstanceSpec spec;
    spec.area.active_zones.clear();
    std::string key;
    std::istringstream rest;
    std::size_t customers_expected = 0;
    while (r.next(key, rest)) {
        if (key == "kind") {
            std::string k; rest >> k;
            if (k == "vcsd") spec.kind = InstanceKind::VcsdGenerated;
            else if (k == "vrpsd") spec.kind = InstanceKind::VrpsdFixed;
            else throw ParseError("unknown instance kind '" + k + "'", r.line_no);
        } else if (key == "area") {
            rest >> spec.area.width >> spec.area.height;
        } else if (key == "depot") {
            rest >> spec.area.depot.x >> spec.area.depot.y;
        } else if (key == "zones") {
            rest >> spec.area.zones_x >> spec.area.zones_y;
        } else if (key == "active") {
            std::size_t count = 0; rest >> count;
            spec.area.active_zones.resize(count);
            for (std::size_t i = 0; i < count; ++i) rest >> spec.area.active_zones[i];
        } else if (key == "density") {
            std::string name; rest >> name;
            auto level = parse_density(name);
            if (!level) throw ParseError("unknown density '" + name + "'", r.line_no);
            spec.density = density_class(*level);
        } else if (key == "variability") {
            std::string name; rest >> name;
            auto u = parse_variability(name);
            if (!u) throw ParseError("unknown variability '" + name + "'", r.line_no);
            spec.variability = *u;
        } else if (key == "customers") {
            rest >> customers_expected;
        } else if (key == "c") {
            FixedCustomer c;
            rest >> c.loc.x >> c.loc.y >> c.dbar;
            spec.fixed_customers.push_back(c);
        } else if (key == "Q") {
            rest >> spec.Q;
        } else if (key == "m") {
            rest >> spec.m;
        } else if (key == "L") {
            rest >> spec.L;
        } else if (key == "seed") {
            rest >> spec.seed;
        } else {
            throw ParseError("unknown key '" + key + "'", r.line_no);
        }
    }
    if (spec.kind == InstanceKind::VrpsdFixed && spec.fixed_customers.size() != customers_expected)
        throw ParseError("customer count mismatch", r.line_no);
    spec.validate();
    return spec;
}

void save_scenarios(const ScenarioSet& set, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write file: " + path);
    os << kScenarioMagic << ' ' << kSchemaVersion << '\n';
    os << "realizations " << set.realizations.size() << '\n';
    for (std::size_t i = 0; i < set.realizations.size(); ++i) {
        const CustomerRealization& r = set.realizations[i];
        os << "real " << i << ' ' << r.customers.size() << '\n';
        for (const Customer& c : r.customers) {
            os << "c " << c.id << ' ';
            put_double(os, c.loc.x); os << ' ';
            put_double(os, c.loc.y); os << ' ';
            put_double(os, c.dbar); os << '\n';
        }
    }
    os << "scenarios " << set.scenarios.size() << '\n';
    for (const auto& [idx, dem] : set.scenarios) {
        os << "scen " << idx << ' ' << dem.realized.size();
        for (double d : dem.realized) { os << ' '; put_double(os, d); }
        os << '\n';
    }
    if (!os) throw IoError("write failed: " + path);
}

ScenarioSet load_scenarios(const std::string& path) {
    KvReader r(path);
    check_header(r, kScenarioMagic);
    ScenarioSet set;
    std::string key;
    std::istringstream rest;
    CustomerRealization* current = nullptr;
    while (r.next(key, rest)) {
        if (key == "realizations") {
            std::size_t count = 0; rest >> count;
            set.realizations.reserve(count);
        } else if (key == "real") {
            std::size_t idx = 0, n = 0;
            rest >> idx >> n;
            if (idx != set.realizations.size())
                throw ParseError("realization index out of order", r.line_no);
            set.realizations.emplace_back();
            current = &set.realizations.back();
            current->customers.reserve(n);
        } else if (key == "c") {
            if (!current) throw ParseError("customer row before realization header", r.line_no);
            Customer c;
            rest >> c.id >> c.loc.x >> c.loc.y >> c.dbar;
            current->customers.push_back(c);
        } else if (key == "scenarios") {
            std::size_t count = 0; rest >> count;
            set.scenarios.reserve(count);
        } else if (key == "scen") {
            int idx = 0;
            std::size_t n = 0;
            rest >> idx >> n;
            if (idx < 0 || idx >= static_cast<int>(set.realizations.size()))
                throw ParseError("scenario references unknown realization", r.line_no);
            DemandScenario dem;
            dem.realized.resize(n);
            for (std::size_t i = 0; i < n; ++i) rest >> dem.realized[i];
            set.scenarios.emplace_back(idx, std::move(dem));
        } else {
            throw ParseError("unknown key '" + key + "'", r.line_no);
        }
    }
    return set;
}

ScenarioSet sample_scenario_grid(const InstanceSpec& spec, int n_realizations, int n_demands,
                                 const Rng& base) {
    ScenarioSet set;
    set.realizations.reserve(n_realizations);
    for (int r = 0; r < n_realizations; ++r) {
        Rng stream = base.split(0x5ea1u, static_cast<std::uint64_t>(r));
        if (spec.kind == InstanceKind::VcsdGenerated)
            set.realizations.push_back(sample_customers(spec, stream));
        else
            set.realizations.push_back(fixed_realization(spec));
        for (int s = 0; s < n_demands; ++s) {
            Rng dem_stream = base.split(0xdeb7u, static_cast<std::uint64_t>(r) * 1000003u + s);
            set.scenarios.emplace_back(
                r, sample_demands(set.realizations.back(), spec, dem_stream));
        }
    }
    return set;
}

bool instance_equal(const InstanceSpec& a, const InstanceSpec& b) {
    auto fixed_eq = [](const std::vector<FixedCustomer>& u, const std::vector<FixedCustomer>& v) {
        if (u.size() != v.size()) return false;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!(u[i].loc == v[i].loc) || u[i].dbar != v[i].dbar) return false;
        return true;
    };
    return a.kind == b.kind && a.area.width == b.area.width && a.area.height == b.area.height &&
           a.area.depot == b.area.depot && a.area.zones_x == b.area.zones_x &&
           a.area.zones_y == b.area.zones_y && a.area.active_zones == b.area.active_zones &&
           a.density.level == b.density.level && a.Q == b.Q && a.m == b.m && a.L == b.L &&
           a.variability == b.variability && fixed_eq(a.fixed_customers, b.fixed_customers) &&
           a.seed == b.seed;
}

}  // namespace vcsd
