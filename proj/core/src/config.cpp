#include "epo/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace epo {

using nlohmann::json;

std::vector<InstrumentSpec> RunConfig::default_roster() {
    return {InstrumentSpec::swap(InstrumentKind::ReceiverSwap, 0.03, 0.0, 10.0, 1),
            InstrumentSpec::swaption(InstrumentKind::ReceiverSwaption, 0.03, 9.0, 10.0),
            InstrumentSpec::swaption(InstrumentKind::PayerSwaption, 0.03, 9.0, 10.0)};
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: " + key + " " + what);
}

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(context, "must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail(context + "." + key, "is not a recognized key");
    }
}

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) fail(key, "must be a number");
    return j.get<double>();
}

InstrumentKind parse_kind(const std::string& s, const std::string& key) {
    if (s == "receiver_swap") return InstrumentKind::ReceiverSwap;
    if (s == "payer_swap") return InstrumentKind::PayerSwap;
    if (s == "receiver_swaption") return InstrumentKind::ReceiverSwaption;
    if (s == "payer_swaption") return InstrumentKind::PayerSwaption;
    fail(key, "must be one of receiver_swap|payer_swap|receiver_swaption|payer_swaption");
}

std::string kind_name(InstrumentKind k) {
    switch (k) {
        case InstrumentKind::ReceiverSwap: return "receiver_swap";
        case InstrumentKind::PayerSwap: return "payer_swap";
        case InstrumentKind::ReceiverSwaption: return "receiver_swaption";
        default: return "payer_swaption";
    }
}

} // namespace

void RunConfig::validate() const {
    if (curve_pillars.empty()) fail("curve", "needs at least one pillar");
    double prev = 0.0;
    for (const auto& [tenor, rate] : curve_pillars) {
        (void)rate;
        if (tenor <= prev) fail("curve", "tenors must be strictly increasing and positive");
        prev = tenor;
    }
    if (alpha_r <= 0.0) fail("hull_white.alpha_r", "must be positive");
    if (eta_r < 0.0) fail("hull_white.eta_r", "must be nonnegative");
    behavior.validate();
    if (std::abs(correlation) > 1.0) fail("correlation", "must be within [-1, 1]");
    sigmoid.validate();
    mortgage.validate();
    for (const auto& inst : instruments) inst.validate();
    if (loss.p < 1) fail("loss.p", "must be >= 1");
    if (!(loss.q > 0.0 && loss.q < 1.0)) fail("loss.q", "must be in (0,1)");
    if (loss.shortfall_weight < 0.0) fail("loss.k", "must be nonnegative");
    if (!(loss.window_end > loss.window_begin)) fail("loss.window", "must be a nonempty interval");
    lsm.validate();
    if (robust.alpha_min <= 0.0 || robust.alpha_max <= robust.alpha_min)
        fail("robust.alpha_range", "needs 0 < alpha_min < alpha_max");
    if (robust.theta_min >= robust.theta_max) fail("robust.theta_range", "needs theta_min < theta_max");
    if (robust.grid_alpha < 4 || robust.grid_theta < 4) fail("robust.grid", "needs at least 4x4 nodes");
    if (robust.paths < 1) fail("robust.paths", "must be positive");
    if (robust.roster.empty()) fail("robust.roster", "needs at least one instrument");
    for (std::size_t idx : robust.roster)
        if (idx >= instruments.size()) fail("robust.roster", "references an unknown instrument");
    if (simulation.paths < 1) fail("simulation.paths", "must be positive");
    if (simulation.steps_per_year < 1) fail("simulation.steps_per_year", "must be >= 1");
    if (simulation.threads < 1) fail("simulation.threads", "must be >= 1");
    // the Girsanov map must stay admissible
    girsanov_map(behavior, mpr);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"curve", "hull_white", "behavior", "correlation", "market_price_of_risk", "sigmoid",
                "mortgage", "prepayment_mode", "instruments", "loss", "lsm", "robust", "simulation",
                "experiment"});
    RunConfig cfg;
    if (j.contains("curve")) {
        if (!j["curve"].is_array()) fail("curve", "must be an array of [tenor, rate] pairs");
        cfg.curve_pillars.clear();
        for (const auto& p : j["curve"]) {
            if (!p.is_array() || p.size() != 2) fail("curve", "entries must be [tenor, rate] pairs");
            cfg.curve_pillars.emplace_back(get_number(p[0], "curve.tenor"),
                                           get_number(p[1], "curve.rate"));
        }
    }
    if (j.contains("hull_white")) {
        const auto& h = j["hull_white"];
        check_keys(h, "hull_white", {"alpha_r", "eta_r"});
        if (h.contains("alpha_r")) cfg.alpha_r = get_number(h["alpha_r"], "hull_white.alpha_r");
        if (h.contains("eta_r")) cfg.eta_r = get_number(h["eta_r"], "hull_white.eta_r");
    }
    if (j.contains("behavior")) {
        const auto& b = j["behavior"];
        check_keys(b, "behavior", {"alpha_b", "theta_b", "eta_b", "b0"});
        if (b.contains("alpha_b")) cfg.behavior.alpha = get_number(b["alpha_b"], "behavior.alpha_b");
        if (b.contains("theta_b")) cfg.behavior.mean = get_number(b["theta_b"], "behavior.theta_b");
        if (b.contains("eta_b")) cfg.behavior.vol = get_number(b["eta_b"], "behavior.eta_b");
        if (b.contains("b0")) cfg.behavior.b0 = get_number(b["b0"], "behavior.b0");
    }
    if (j.contains("correlation")) cfg.correlation = get_number(j["correlation"], "correlation");
    if (j.contains("market_price_of_risk")) {
        const auto& m = j["market_price_of_risk"];
        check_keys(m, "market_price_of_risk", {"lambda0", "lambda1"});
        if (m.contains("lambda0"))
            cfg.mpr.lambda0 = get_number(m["lambda0"], "market_price_of_risk.lambda0");
        if (m.contains("lambda1"))
            cfg.mpr.lambda1 = get_number(m["lambda1"], "market_price_of_risk.lambda1");
    }
    if (j.contains("sigmoid")) {
        const auto& s = j["sigmoid"];
        check_keys(s, "sigmoid", {"l", "u", "a", "rational"});
        if (s.contains("l")) cfg.sigmoid.lower = get_number(s["l"], "sigmoid.l");
        if (s.contains("u")) cfg.sigmoid.upper = get_number(s["u"], "sigmoid.u");
        if (s.contains("a")) cfg.sigmoid.steepness = get_number(s["a"], "sigmoid.a");
        if (s.contains("rational")) {
            if (!s["rational"].is_boolean()) fail("sigmoid.rational", "must be a boolean");
            cfg.sigmoid.rational = s["rational"].get<bool>();
        }
    }
    if (j.contains("mortgage")) {
        const auto& m = j["mortgage"];
        check_keys(m, "mortgage",
                   {"notional", "fixed_rate", "issue", "tenor_years", "payments_per_year",
                    "amortization"});
        double notional = cfg.mortgage.notional0, rate = cfg.mortgage.fixed_rate;
        double issue = cfg.mortgage.issue;
        int tenor = static_cast<int>(cfg.mortgage.payment_dates.size());
        int freq = 1;
        Amortization am = cfg.mortgage.amortization;
        if (m.contains("notional")) notional = get_number(m["notional"], "mortgage.notional");
        if (m.contains("fixed_rate")) rate = get_number(m["fixed_rate"], "mortgage.fixed_rate");
        if (m.contains("issue")) issue = get_number(m["issue"], "mortgage.issue");
        if (m.contains("tenor_years"))
            tenor = static_cast<int>(get_number(m["tenor_years"], "mortgage.tenor_years"));
        if (m.contains("payments_per_year"))
            freq = static_cast<int>(get_number(m["payments_per_year"], "mortgage.payments_per_year"));
        if (m.contains("amortization")) {
            const std::string s = m["amortization"].get<std::string>();
            if (s == "bullet")
                am = Amortization::Bullet;
            else if (s == "linear")
                am = Amortization::Linear;
            else
                fail("mortgage.amortization", "must be \"bullet\" or \"linear\"");
        }
        if (tenor < 1) fail("mortgage.tenor_years", "must be >= 1");
        if (freq < 1) fail("mortgage.payments_per_year", "must be >= 1");
        MortgageSpec spec;
        spec.notional0 = notional;
        spec.fixed_rate = rate;
        spec.issue = issue;
        spec.amortization = am;
        const int n = tenor * freq;
        for (int k = 1; k <= n; ++k)
            spec.payment_dates.push_back(issue + static_cast<double>(k) / freq);
        cfg.mortgage = spec;
    }
    if (j.contains("prepayment_mode")) {
        const std::string s = j["prepayment_mode"].get<std::string>();
        if (s == "continuous")
            cfg.prepayment_mode = PrepaymentMode::Continuous;
        else if (s == "reset_lump")
            cfg.prepayment_mode = PrepaymentMode::ResetLump;
        else
            fail("prepayment_mode", "must be \"continuous\" or \"reset_lump\"");
    }
    if (j.contains("instruments")) {
        if (!j["instruments"].is_array()) fail("instruments", "must be an array");
        cfg.instruments.clear();
        for (const auto& e : j["instruments"]) {
            check_keys(e, "instruments[]",
                       {"kind", "strike", "start", "end", "payments_per_year", "maturity",
                        "notional"});
            if (!e.contains("kind")) fail("instruments[].kind", "is required");
            const InstrumentKind kind = parse_kind(e["kind"].get<std::string>(), "instruments[].kind");
            const double strike =
                e.contains("strike") ? get_number(e["strike"], "instruments[].strike") : 0.0;
            const double start = e.contains("start") ? get_number(e["start"], "instruments[].start") : 0.0;
            if (!e.contains("end")) fail("instruments[].end", "is required");
            const double end = get_number(e["end"], "instruments[].end");
            const double notional =
                e.contains("notional") ? get_number(e["notional"], "instruments[].notional") : 1.0;
            if (is_swap(kind)) {
                const int freq = e.contains("payments_per_year")
                                     ? static_cast<int>(get_number(e["payments_per_year"],
                                                                   "instruments[].payments_per_year"))
                                     : 1;
                cfg.instruments.push_back(InstrumentSpec::swap(kind, strike, start, end, freq, notional));
            } else {
                cfg.instruments.push_back(InstrumentSpec::swaption(kind, strike, start, end, notional));
                if (e.contains("maturity") &&
                    std::abs(get_number(e["maturity"], "instruments[].maturity") - start) > 1e-9)
                    fail("instruments[].maturity", "must equal the underlying start");
            }
        }
    }
    if (j.contains("loss")) {
        const auto& l = j["loss"];
        check_keys(l, "loss", {"p", "q", "k", "window"});
        if (l.contains("p")) cfg.loss.p = static_cast<int>(get_number(l["p"], "loss.p"));
        if (l.contains("q")) cfg.loss.q = get_number(l["q"], "loss.q");
        if (l.contains("k")) cfg.loss.shortfall_weight = get_number(l["k"], "loss.k");
        if (l.contains("window")) {
            if (!l["window"].is_array() || l["window"].size() != 2)
                fail("loss.window", "must be [begin, end]");
            cfg.loss.window_begin = get_number(l["window"][0], "loss.window[0]");
            cfg.loss.window_end = get_number(l["window"][1], "loss.window[1]");
        }
    } else {
        cfg.loss.window_begin = cfg.mortgage.issue;
        cfg.loss.window_end = cfg.mortgage.maturity();
    }
    if (j.contains("lsm")) {
        const auto& l = j["lsm"];
        check_keys(l, "lsm", {"degree", "ridge"});
        if (l.contains("degree"))
            cfg.lsm.basis.degree = static_cast<int>(get_number(l["degree"], "lsm.degree"));
        if (l.contains("ridge")) cfg.lsm.ridge = get_number(l["ridge"], "lsm.ridge");
    }
    if (j.contains("robust")) {
        const auto& r = j["robust"];
        check_keys(r, "robust", {"alpha_range", "theta_range", "grid", "paths", "roster"});
        if (r.contains("alpha_range")) {
            if (!r["alpha_range"].is_array() || r["alpha_range"].size() != 2)
                fail("robust.alpha_range", "must be [min, max]");
            cfg.robust.alpha_min = get_number(r["alpha_range"][0], "robust.alpha_range[0]");
            cfg.robust.alpha_max = get_number(r["alpha_range"][1], "robust.alpha_range[1]");
        }
        if (r.contains("theta_range")) {
            if (!r["theta_range"].is_array() || r["theta_range"].size() != 2)
                fail("robust.theta_range", "must be [min, max]");
            cfg.robust.theta_min = get_number(r["theta_range"][0], "robust.theta_range[0]");
            cfg.robust.theta_max = get_number(r["theta_range"][1], "robust.theta_range[1]");
        }
        if (r.contains("grid")) {
            if (!r["grid"].is_array() || r["grid"].size() != 2) fail("robust.grid", "must be [na, nt]");
            cfg.robust.grid_alpha = static_cast<int>(get_number(r["grid"][0], "robust.grid[0]"));
            cfg.robust.grid_theta = static_cast<int>(get_number(r["grid"][1], "robust.grid[1]"));
        }
        if (r.contains("paths"))
            cfg.robust.paths = static_cast<std::size_t>(get_number(r["paths"], "robust.paths"));
        if (r.contains("roster")) {
            if (!r["roster"].is_array()) fail("robust.roster", "must be an array of 1-based indices");
            cfg.robust.roster.clear();
            for (const auto& e : r["roster"]) {
                const auto idx = static_cast<long long>(get_number(e, "robust.roster[]"));
                if (idx < 1) fail("robust.roster", "indices are 1-based");
                cfg.robust.roster.push_back(static_cast<std::size_t>(idx - 1));
            }
        }
    }
    if (j.contains("simulation")) {
        const auto& s = j["simulation"];
        check_keys(s, "simulation", {"seed", "paths", "steps_per_year", "threads"});
        if (s.contains("seed"))
            cfg.simulation.seed = static_cast<std::uint64_t>(get_number(s["seed"], "simulation.seed"));
        if (s.contains("paths"))
            cfg.simulation.paths = static_cast<std::size_t>(get_number(s["paths"], "simulation.paths"));
        if (s.contains("steps_per_year"))
            cfg.simulation.steps_per_year =
                static_cast<int>(get_number(s["steps_per_year"], "simulation.steps_per_year"));
        if (s.contains("threads"))
            cfg.simulation.threads = static_cast<int>(get_number(s["threads"], "simulation.threads"));
    }
    if (j.contains("experiment")) cfg.experiment = j["experiment"].get<std::string>();
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json j;
    for (const auto& [tenor, rate] : curve_pillars) j["curve"].push_back({tenor, rate});
    j["hull_white"] = {{"alpha_r", alpha_r}, {"eta_r", eta_r}};
    j["behavior"] = {{"alpha_b", behavior.alpha},
                     {"theta_b", behavior.mean},
                     {"eta_b", behavior.vol},
                     {"b0", behavior.b0}};
    j["correlation"] = correlation;
    j["market_price_of_risk"] = {{"lambda0", mpr.lambda0}, {"lambda1", mpr.lambda1}};
    j["sigmoid"] = {{"l", sigmoid.lower},
                    {"u", sigmoid.upper},
                    {"a", sigmoid.steepness},
                    {"rational", sigmoid.rational}};
    const int n = static_cast<int>(mortgage.payment_dates.size());
    const double tenor_years = mortgage.maturity() - mortgage.issue;
    j["mortgage"] = {{"notional", mortgage.notional0},
                     {"fixed_rate", mortgage.fixed_rate},
                     {"issue", mortgage.issue},
                     {"tenor_years", tenor_years},
                     {"payments_per_year", n / std::max(tenor_years, 1.0)},
                     {"amortization",
                      mortgage.amortization == Amortization::Bullet ? "bullet" : "linear"}};
    j["prepayment_mode"] =
        prepayment_mode == PrepaymentMode::Continuous ? "continuous" : "reset_lump";
    for (const auto& inst : instruments) {
        json e = {{"kind", kind_name(inst.kind)},
                  {"strike", inst.strike},
                  {"start", inst.start},
                  {"end", inst.payment_dates.back()},
                  {"notional", inst.notional}};
        if (is_swaption(inst.kind)) e["maturity"] = inst.maturity;
        j["instruments"].push_back(e);
    }
    j["loss"] = {{"p", loss.p},
                 {"q", loss.q},
                 {"k", loss.shortfall_weight},
                 {"window", {loss.window_begin, loss.window_end}}};
    j["lsm"] = {{"degree", lsm.basis.degree}, {"ridge", lsm.ridge}};
    json roster_json = json::array();
    for (std::size_t idx : robust.roster) roster_json.push_back(idx + 1);
    j["robust"] = {{"alpha_range", {robust.alpha_min, robust.alpha_max}},
                   {"theta_range", {robust.theta_min, robust.theta_max}},
                   {"grid", {robust.grid_alpha, robust.grid_theta}},
                   {"paths", robust.paths},
                   {"roster", roster_json}};
    j["simulation"] = {{"seed", simulation.seed},
                       {"paths", simulation.paths},
                       {"steps_per_year", simulation.steps_per_year},
                       {"threads", simulation.threads}};
    if (!experiment.empty()) j["experiment"] = experiment;
    return j.dump(2);
}

std::string RunConfig::canonical_hash() const {
    const std::string text = to_json_text();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

HullWhiteParams RunConfig::make_hull_white() const {
    return fit_theta(YieldCurve(curve_pillars), alpha_r, eta_r);
}

TimeGrid RunConfig::make_grid() const {
    return TimeGrid::regular(mortgage.issue, mortgage.maturity(), simulation.steps_per_year,
                             mortgage.reset_dates(), mortgage.payment_dates);
}

LossConfig RunConfig::make_loss_config() const {
    LossConfig lc;
    lc.p = loss.p;
    lc.q = loss.q;
    lc.shortfall_weight = loss.shortfall_weight;
    lc.window_begin = loss.window_begin;
    lc.window_end = loss.window_end;
    return lc;
}

} // namespace epo
