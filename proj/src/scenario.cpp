#include "sis/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sis/errors.hpp"

namespace sis {

using nlohmann::json;

const Configuration& Scenario::initial_configuration() const {
  if (const auto* x = std::get_if<Configuration>(&initial)) return *x;
  throw ArgumentError("scenario has a probabilistic initial condition, a configuration is required");
}

std::vector<double> Scenario::initial_probabilities() const {
  if (const auto* p = std::get_if<std::vector<double>>(&initial)) return *p;
  const auto& x = std::get<Configuration>(initial);
  std::vector<double> p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] ? 1.0 : 0.0;
  return p;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ArgumentError(source_ + ": " + where + ": " + what);
  }

  std::size_t count(const json& j, const std::string& where) const {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
    return j.get<std::size_t>();
  }

  double number(const json& j, const std::string& where) const {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
  }

  std::vector<double> numbers(const json& j, const std::string& where) const {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::vector<Edge> edges(const json& j, const std::string& where) const {
    if (!j.is_array()) fail(where, "expected an array of {from, to, w}");
    std::vector<Edge> out;
    for (std::size_t e = 0; e < j.size(); ++e) {
      const std::string at = where + "[" + std::to_string(e) + "]";
      const json& item = j[e];
      if (!item.is_object()) fail(at, "expected an object {from, to, w}");
      for (const char* key : {"from", "to", "w"})
        if (!item.contains(key)) fail(at, std::string("missing '") + key + "'");
      out.push_back({count(item["from"], at + ".from"), count(item["to"], at + ".to"),
                     number(item["w"], at + ".w")});
    }
    return out;
  }

 private:
  std::string source_;
};

bool is_per_step(const json& j) { return j.is_array() && !j.empty() && j.front().is_array(); }

std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
  const Reader rd(source);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string(source) + ":" + locate(text, e.byte) + ": malformed JSON (" +
                        e.what() + ")");
  }
  if (!doc.is_object()) rd.fail("top level", "expected a JSON object");
  if (!doc.contains("n")) rd.fail("top level", "missing 'n'");
  const std::size_t n = rd.count(doc["n"], "n");
  if (n == 0) rd.fail("n", "must be at least 1");

  const json edges = doc.value("edges", json::array());
  if (!doc.contains("self_loops")) rd.fail("top level", "missing 'self_loops' (every node needs one)");
  const json& loops = doc["self_loops"];

  std::size_t horizon = doc.contains("T") ? rd.count(doc["T"], "T") : 0;
  const bool per_step = is_per_step(edges) || is_per_step(loops);
  if (per_step) {
    const std::size_t steps = is_per_step(edges) ? edges.size() : loops.size();
    if (horizon == 0) horizon = steps;
    if (horizon != steps)
      rd.fail("T", "declares " + std::to_string(horizon) + " steps but per-step lists have " +
                       std::to_string(steps));
    if (is_per_step(edges) && is_per_step(loops) && edges.size() != loops.size())
      rd.fail("self_loops", "per-step list length differs from 'edges'");
  }
  if (horizon == 0) horizon = kDefaultHorizon;

  Scenario sc{TemporalNetwork::make_static(1, 1, {}, std::vector<double>{0.0}), kDefaultBeta,
              kDefaultCost, Configuration(n)};
  try {
    if (!per_step) {
      sc.network = TemporalNetwork::make_static(n, horizon, rd.edges(edges, "edges"),
                                                rd.numbers(loops, "self_loops"));
    } else {
      std::vector<std::vector<Edge>> e(horizon);
      std::vector<std::vector<double>> l(horizon);
      for (std::size_t k = 0; k < horizon; ++k) {
        const std::string ks = "[" + std::to_string(k) + "]";
        e[k] = is_per_step(edges) ? rd.edges(edges[k], "edges" + ks) : rd.edges(edges, "edges");
        l[k] = is_per_step(loops) ? rd.numbers(loops[k], "self_loops" + ks)
                                  : rd.numbers(loops, "self_loops");
      }
      sc.network = TemporalNetwork::make_time_varying(n, e, l);
    }
  } catch (const json::exception& e) {
    rd.fail("network", e.what());
  } catch (const ArgumentError& e) {
    if (std::string_view(e.what()).starts_with(source)) throw;
    rd.fail("network", e.what());
  }

  sc.beta = doc.contains("beta") ? rd.number(doc["beta"], "beta") : kDefaultBeta;
  if (!(sc.beta >= 0.0 && sc.beta <= 1.0)) rd.fail("beta", "must lie in [0,1]");
  sc.cost = doc.contains("c") ? rd.number(doc["c"], "c") : kDefaultCost;
  if (!(sc.cost >= 0.0)) rd.fail("c", "must be non-negative");

  if (doc.contains("initial")) {
    const json& init = doc["initial"];
    if (init.contains("configuration")) {
      if (!init["configuration"].is_string()) rd.fail("initial.configuration", "expected a bit string");
      try {
        sc.initial = Configuration::parse(init["configuration"].get<std::string>());
      } catch (const ArgumentError& e) {
        rd.fail("initial.configuration", e.what());
      }
      if (std::get<Configuration>(sc.initial).size() != n)
        rd.fail("initial.configuration", "length differs from n");
    } else if (init.contains("probabilities")) {
      auto p = rd.numbers(init["probabilities"], "initial.probabilities");
      if (p.size() != n) rd.fail("initial.probabilities", "length differs from n");
      for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) rd.fail("initial.probabilities", "entries must lie in [0,1]");
      sc.initial = std::move(p);
    } else {
      rd.fail("initial", "expected 'configuration' or 'probabilities'");
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

namespace {

json edges_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({{"from", e.from}, {"to", e.to}, {"w", e.weight}});
  return out;
}

}  // namespace

std::string dump_scenario(const Scenario& sc) {
  const auto& net = sc.network;
  json doc;
  doc["n"] = net.size();
  doc["T"] = net.horizon();
  doc["beta"] = sc.beta;
  doc["c"] = sc.cost;
  if (net.is_static()) {
    doc["edges"] = edges_json(net.at(0).edges());
    doc["self_loops"] = net.at(0).self_loops();
  } else {
    json e = json::array(), l = json::array();
    for (std::size_t k = 0; k < net.horizon(); ++k) {
      e.push_back(edges_json(net.at(k).edges()));
      l.push_back(net.at(k).self_loops());
    }
    doc["edges"] = std::move(e);
    doc["self_loops"] = std::move(l);
  }
  if (const auto* x = std::get_if<Configuration>(&sc.initial))
    doc["initial"] = {{"configuration", x->to_string()}};
  else
    doc["initial"] = {{"probabilities", std::get<std::vector<double>>(sc.initial)}};
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& sc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError(path.string() + ": cannot write scenario file");
  out << dump_scenario(sc);
}

Scenario random_scenario(const RandomScenarioSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scenario sc{random_network(spec.network, rng), spec.beta, spec.cost, Configuration(spec.network.n)};
  Configuration x0(spec.network.n);
  std::bernoulli_distribution infected(std::clamp(spec.infected_fraction, 0.0, 1.0));
  for (std::size_t i = 0; i < x0.size(); ++i) x0.set(i, infected(rng));
  if (x0.none()) x0.set(std::uniform_int_distribution<std::size_t>(0, x0.size() - 1)(rng), true);
  sc.initial = x0;
  return sc;
}

}  // namespace sis
