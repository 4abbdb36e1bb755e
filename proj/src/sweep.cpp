#include "pmlab/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <set>
#include <thread>

#include "json.hpp"
#include "pmlab/errors.hpp"

namespace pmlab {

namespace {

using nlohmann::json;

const std::set<std::string> kAxisNames = {"mu", "nu", "l", "a", "k0", "u0"};

[[noreturn]] void bad(const std::string& what) {
  throw ConfigError("config_parse", what);
}

double axis_value(const SweepAxis& ax, int i) {
  if (ax.count <= 1) return ax.lo;
  return ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
}

void apply_axis(RunConfig& rc, const std::string& name, double v) {
  if (name == "mu") {
    rc.problem.mu = v;
  } else if (name == "nu") {
    rc.problem.nu = v;
  } else if (name == "l") {
    rc.problem.l = v;
  } else if (name == "a") {
    rc.problem.a = v;
  } else if (name == "k0") {
    std::get<ConstantKernel>(rc.problem.kernel).k0 = v;
  } else {  // u0
    std::get<ConstantValue>(rc.problem.initial).value = v;
  }
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json point_json(const SweepPoint& p) {
  json j;
  j["index"] = p.index;
  j["values"] = p.values;
  j["verdict"] = p.verdict;
  j["clause"] = p.clause;
  j["sim_status"] = p.sim_status;
  j["error"] = p.error;
  return j;
}

bool point_from_json(const std::string& text, SweepPoint& p) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  if (!j.contains("index") || !j.contains("values") || !j.contains("verdict"))
    return false;
  p.index = j["index"].get<long>();
  p.values = j["values"].get<std::vector<double>>();
  p.verdict = j["verdict"].get<std::string>();
  p.clause = j.value("clause", "");
  p.sim_status = j.value("sim_status", "");
  p.error = j.value("error", "");
  return true;
}

SweepPoint compute_point(const SweepPlan& plan, long index) {
  SweepPoint p;
  p.index = index;
  long rem = index;
  std::vector<int> idx(plan.axes.size(), 0);
  for (std::size_t k = plan.axes.size(); k-- > 0;) {
    idx[k] = static_cast<int>(rem % plan.axes[k].count);
    rem /= plan.axes[k].count;
  }
  for (std::size_t k = 0; k < plan.axes.size(); ++k)
    p.values.push_back(axis_value(plan.axes[k], idx[k]));
  try {
    RunConfig rc = point_config(plan, index);
    ValidatedSpec vs = validate(rc.problem);
    RegimeInputs in = regime_inputs(vs, rc.layer_depth);
    RegimeVerdict v = classify(in);
    p.verdict = to_string(v.verdict);
    p.clause = v.clause;
    if (plan.simulate) {
      SimulationOutcome o = solve(vs, rc.solver);
      switch (o.status) {
        case RunStatus::CompletedBounded: p.sim_status = "completed_bounded"; break;
        case RunStatus::BlowUpDetected: p.sim_status = "blow_up_detected"; break;
        case RunStatus::InconclusiveResolutionLimit:
          p.sim_status = "inconclusive_resolution_limit";
          break;
      }
    }
  } catch (const Error& e) {
    p.error = e.code() + std::string(": ") + e.what();
  }
  return p;
}

}  // namespace

long sweep_size(const SweepPlan& plan) {
  long n = 1;
  for (const auto& ax : plan.axes) n *= ax.count;
  return plan.axes.empty() ? 0 : n;
}

RunConfig point_config(const SweepPlan& plan, long index) {
  RunConfig rc = plan.base;
  long rem = index;
  std::vector<int> idx(plan.axes.size(), 0);
  for (std::size_t k = plan.axes.size(); k-- > 0;) {
    idx[k] = static_cast<int>(rem % plan.axes[k].count);
    rem /= plan.axes[k].count;
  }
  for (std::size_t k = 0; k < plan.axes.size(); ++k)
    apply_axis(rc, plan.axes[k].name, axis_value(plan.axes[k], idx[k]));
  return rc;
}

SweepPlan parse_sweep(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("sweep plan must be a JSON object");
  for (const auto& item : j.items())
    if (item.key() != "base" && item.key() != "axes" && item.key() != "jobs" &&
        item.key() != "simulate")
      bad("unknown key \"" + item.key() + "\"");
  if (!j.contains("base")) bad("missing key \"base\"");
  SweepPlan plan;
  plan.base = parse_config(j.at("base").dump());
  if (!j.contains("axes")) bad("missing key \"axes\"");
  const json& axes = j.at("axes");
  if (!axes.is_array()) bad("key \"axes\" must be an array");
  for (const auto& ax : axes) {
    if (!ax.is_object()) bad("each axis must be an object");
    for (const auto& item : ax.items())
      if (item.key() != "name" && item.key() != "lo" && item.key() != "hi" &&
          item.key() != "count")
        bad("unknown key \"axes." + item.key() + "\"");
    SweepAxis a;
    if (!ax.contains("name") || !ax.at("name").is_string())
      bad("axis needs a string \"name\"");
    a.name = ax.at("name").get<std::string>();
    if (!kAxisNames.count(a.name))
      bad("axis name \"" + a.name + "\" is not one of mu, nu, l, a, k0, u0");
    if (!ax.contains("lo") || !ax.at("lo").is_number())
      bad("axis \"" + a.name + "\" needs a numeric \"lo\"");
    a.lo = ax.at("lo").get<double>();
    a.hi = ax.contains("hi") ? ax.at("hi").get<double>() : a.lo;
    a.count = ax.contains("count") ? ax.at("count").get<int>() : 1;
    if (a.count < 1) bad("axis \"" + a.name + "\" count must be >= 1");
    if (a.count > 1 && !(a.hi > a.lo))
      bad("axis \"" + a.name + "\" needs hi > lo when count > 1");
    if (a.name == "k0" && !std::holds_alternative<ConstantKernel>(plan.base.problem.kernel))
      bad("axis \"k0\" requires the base kernel to be the constant variant");
    if (a.name == "u0" && !std::holds_alternative<ConstantValue>(plan.base.problem.initial))
      bad("axis \"u0\" requires the base initial data to be the constant variant");
    plan.axes.push_back(a);
  }
  plan.jobs = j.value("jobs", 1);
  if (plan.jobs < 1) bad("key \"jobs\" must be >= 1");
  plan.simulate = j.value("simulate", false);
  return plan;
}

SweepPlan load_sweep(const std::string& path) {
  return parse_sweep(read_text_file(path));
}

SweepResult run_sweep(const SweepPlan& plan, const std::string& out_dir) {
  namespace fs = std::filesystem;
  SweepResult res;
  for (const auto& ax : plan.axes) res.axis_names.push_back(ax.name);
  long total = sweep_size(plan);
  res.points.resize(static_cast<std::size_t>(std::max<long>(total, 0)));

  fs::path points_dir = fs::path(out_dir) / "points";
  std::error_code ec;
  fs::create_directories(points_dir, ec);
  if (ec)
    throw ConfigError("output_unwritable",
                      "cannot create " + points_dir.string() + ": " + ec.message());

  // resolve each point's record path up front (hash depends on the config)
  std::vector<std::string> record_paths(res.points.size());
  for (long i = 0; i < total; ++i) {
    std::string tag = config_hash(point_config(plan, i));
    if (plan.simulate) tag += "s";
    record_paths[i] =
        (points_dir / ("p" + std::to_string(i) + "_" + tag + ".json")).string();
  }

  std::atomic<long> next{0};
  std::atomic<long> computed{0};
  int workers = std::max(1, plan.jobs);
  auto work = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= total) return;
      SweepPoint p;
      bool resumed = false;
      if (fs::exists(record_paths[i])) {
        try {
          resumed = point_from_json(read_text_file(record_paths[i]), p) &&
                    p.index == i;
        } catch (const Error&) {
          resumed = false;
        }
      }
      if (!resumed) {
        p = compute_point(plan, i);
        write_text_file(record_paths[i], point_json(p).dump(2) + "\n");
        computed.fetch_add(1);
      }
      res.points[i] = std::move(p);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  res.computed = computed.load();

  write_text_file((fs::path(out_dir) / "sweep.csv").string(), sweep_csv(res));
  return res;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = "index";
  for (const auto& n : r.axis_names) out += "," + n;
  out += ",verdict,clause,sim_status,error\n";
  for (const auto& p : r.points) {
    out += std::to_string(p.index);
    for (double v : p.values) out += "," + g17(v);
    std::string err = p.error;  // error text may carry commas; keep the row flat
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    out += "," + p.verdict + "," + p.clause + "," + p.sim_status + "," + err + "\n";
  }
  return out;
}

}  // namespace pmlab
