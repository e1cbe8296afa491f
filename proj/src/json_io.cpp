#include "nervekit/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nervekit {

using nlohmann::json;

json to_json(const GridIfs& ifs) {
  json levels = json::array();
  for (const LevelSet& level : ifs.stored_levels()) {
    json lv = json::array();
    for (FlatDigit f : level.digits()) lv.push_back(ifs.unflatten(f));
    levels.push_back(lv);
  }
  json tail = {{"kind", to_string(ifs.tail().kind)}};
  if (ifs.tail().kind == TailPolicy::Kind::Periodic) tail["period"] = ifs.tail().period;
  return {{"d", ifs.dim()}, {"n", ifs.n()}, {"levels", levels}, {"tail", tail}};
}

namespace {

TailPolicy tail_from_json(const json& j) {
  const std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "full") return TailPolicy::full();
  if (kind == "truncate") return TailPolicy::truncate();
  if (kind == "periodic") return TailPolicy::periodic(j.at("period").get<int>());
  throw std::invalid_argument("unknown tail kind: " + kind);
}

}  // namespace

GridIfs grid_from_json(const json& j) {
  auto n = j.at("n").get<std::vector<int>>();
  if (j.contains("d") && j.at("d").get<int>() != static_cast<int>(n.size()))
    throw std::invalid_argument("d does not match the length of n");
  auto levels = j.at("levels").get<std::vector<std::vector<Digit>>>();
  for (const auto& level : levels)
    for (const auto& digit : level)
      if (digit.size() != n.size()) throw std::invalid_argument("digit of wrong dimension");
  TailPolicy tail = j.contains("tail") ? tail_from_json(j.at("tail")) : TailPolicy::full();
  return GridIfs(std::move(n), levels, tail);
}

json to_json(const AffineSystem1D& sys) {
  json levels = json::array();
  std::size_t widest = 0;
  for (const auto& level : sys.stored_levels()) {
    json lv = json::array();
    for (const AffineMap& f : level) lv.push_back({{"slope", to_string(f.slope)}, {"offset", to_string(f.offset)}});
    levels.push_back(lv);
    widest = std::max(widest, level.size());
  }
  json symbols = json::array();
  for (std::size_t i = 0; i < widest; ++i) symbols.push_back(sys.symbol(i));
  return {{"kind", "affine1d"}, {"levels", levels}, {"period", sys.period()}, {"symbols", symbols}};
}

AffineSystem1D affine_from_json(const json& j) {
  std::vector<std::vector<AffineMap>> levels;
  for (const auto& lv : j.at("levels")) {
    std::vector<AffineMap> maps;
    for (const auto& f : lv) {
      auto rat = [](const json& v) {
        return v.is_string() ? parse_rational(v.get<std::string>()) : make_rational(v.get<std::int64_t>());
      };
      maps.push_back({rat(f.at("slope")), rat(f.at("offset"))});
    }
    levels.push_back(std::move(maps));
  }
  std::vector<std::string> symbols;
  if (j.contains("symbols")) symbols = j.at("symbols").get<std::vector<std::string>>();
  return AffineSystem1D(std::move(levels), j.value("period", 1), std::move(symbols));
}

json to_json(const Nerve& nerve) {
  json vertices = json::array();
  for (Vertex v = 0; v < nerve.complex.vertex_count(); ++v) {
    if (v < nerve.labels.size())
      vertices.push_back(nerve.labels[v]);
    else
      vertices.push_back(v);
  }
  json simplices = json::object();
  for (int q = 1; q <= nerve.complex.dimension(); ++q) {
    json list = json::array();
    for (std::size_t i = 0; i < nerve.complex.count(q); ++i) {
      auto s = nerve.complex.simplex(q, i);
      list.push_back(std::vector<Vertex>(s.begin(), s.end()));
    }
    simplices[std::to_string(q)] = list;
  }
  const NerveMeta& m = nerve.meta;
  return {{"vertices", vertices},
          {"simplices", simplices},
          {"meta",
           {{"j", m.j}, {"k", m.k}, {"verdict_mode", to_string(m.mode)}, {"unknown", m.unknown},
            {"maxdim", m.maxdim}, {"maxdim_capped", m.maxdim_capped}}}};
}

json to_json(const Verdict& v) {
  json out = {{"kind", to_string(v.kind)}, {"depth", v.depth}};
  if (!v.witness.empty()) {
    json w = json::array();
    for (const WordStream& s : v.witness) w.push_back({{"prefix", s.prefix}, {"cycle", s.cycle}});
    out["witness"] = w;
  }
  if (v.point) {
    json p = json::array();
    for (const Rational& x : *v.point) p.push_back(to_string(x));
    out["point"] = p;
  }
  return out;
}

json to_json(const BettiReport& r) {
  json torsion = json::array();
  for (const auto& t : r.torsion) {
    json list = json::array();
    for (const BigInt& d : t) list.push_back(to_string(d));
    torsion.push_back(list);
  }
  return {{"j", r.meta.j},
          {"k", r.meta.k},
          {"betti", r.betti},
          {"torsion", torsion},
          {"method", r.method},
          {"verdict_mode", to_string(r.meta.mode)},
          {"unknown", r.meta.unknown}};
}

json to_json(const TrialConfig& c) {
  return {{"n", c.n},
          {"r", c.r},
          {"kmax", c.kmax},
          {"trials", c.trials},
          {"seed", c.seed},
          {"tail_block", c.tail_block},
          {"require_no_corner", c.require_no_corner},
          {"max_redraws", c.max_redraws},
          {"homology", c.homology},
          {"verdict_mode", to_string(c.mode)},
          {"cell_budget", c.cell_budget},
          {"threads", c.threads}};
}

TrialConfig trial_config_from_json(const json& j) {
  TrialConfig c;
  c.n = j.at("n").get<std::vector<int>>();
  if (j.contains("d") && j.at("d").get<int>() != c.d())
    throw std::invalid_argument("d does not match the length of n");
  c.r = j.value("r", c.r);
  c.kmax = j.value("kmax", c.kmax);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.tail_block = j.value("tail_block", c.tail_block);
  c.require_no_corner = j.value("require_no_corner", c.require_no_corner);
  c.max_redraws = j.value("max_redraws", c.max_redraws);
  c.homology = j.value("homology", c.homology);
  if (j.contains("verdict_mode")) c.mode = parse_verdict_mode(j.at("verdict_mode").get<std::string>());
  c.cell_budget = j.value("cell_budget", c.cell_budget);
  c.threads = j.value("threads", c.threads);
  validate(c);
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace nervekit
