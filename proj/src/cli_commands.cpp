#include <algorithm>

#include "cli_context.hpp"
#include "slalomlab/chain.hpp"
#include "slalomlab/constructions.hpp"
#include "slalomlab/forcing.hpp"

namespace slalomlab::cli {

using nlohmann::json;

namespace {

json verdict_json(const IdealVerdict& v) {
  json e = {{"status", to_string(v.status)}, {"certificate", v.certificate}, {"partial_sum", rat(v.partial_sum)}};
  if (v.level) e["level"] = *v.level;
  return e;
}

void cmd_classify(Context& c) {
  std::vector<std::pair<std::string, const Member*>> targets;
  if (c.has("set")) {
    const std::string ref = c.need("set");
    targets.emplace_back(ref, &resolve_member(c.config, ref));
  } else {
    std::vector<const FamilySpec*> fams;
    if (c.has("family"))
      fams.push_back(&c.family());
    else
      for (const auto& f : c.config.families) fams.push_back(&f);
    for (const auto* f : fams)
      for (const auto& m : f->members) targets.emplace_back(f->name + "." + m.id, &m);
  }
  json rows = json::array();
  for (const auto& [ref, m] : targets) {
    json verdicts = json::object();
    for (const auto& v : classify(m->slalom)) verdicts[to_string(v.ideal)] = verdict_json(v);
    rows.push_back(
        {{"member", ref}, {"provenance", m->provenance}, {"slalom", slalom_json(m->slalom)}, {"verdicts", verdicts}});
  }
  c.result["members"] = rows;
}

void cmd_localize(Context& c) {
  const Slalom& s = c.set();
  const auto& fam = c.family();
  std::vector<PathReal> paths;
  for (const auto& m : fam.members) {
    if (!m.path) throw InputError("member " + fam.name + "." + m.id + " is not a graph of a path");
    paths.push_back(*m.path);
  }
  const auto verdicts = localizes(s, paths);
  json rows = json::array();
  for (std::size_t i = 0; i < verdicts.size(); ++i)
    rows.push_back({{"member", fam.name + "." + fam.members[i].id},
                    {"status", to_string(verdicts[i].status)},
                    {"witness", verdicts[i].witness},
                    {"violations", verdicts[i].violations}});
  c.result["paths"] = rows;
}

void cmd_omega_enum(Context& c) {
  const auto depth = static_cast<unsigned>(c.number("depth", 2, 0, kEnumCap));
  const auto points = enum_omega(depth);
  const BigInt expected = omega_count(depth);
  c.result["count"] = points.size();
  c.result["expected"] = expected.get_str();
  if (depth <= 2) {
    json list = json::array();
    for (const auto& p : points) list.push_back(point_json(p));
    c.result["points"] = list;
  }
  if (BigInt(std::to_string(points.size())) != expected)
    c.finding("enumerated " + std::to_string(points.size()) + " points, expected " + expected.get_str());
}

void cmd_fact_check(Context& c) {
  const auto depth = static_cast<unsigned>(c.number("depth", 8, 1, 12));
  const auto trials = static_cast<unsigned>(c.number("trials", 100, 1, 10000));
  const auto seed = c.number("seed", 1);
  const auto r = fact_check(depth, trials, seed);
  c.result = {{"pairs", r.pairs},
              {"points_checked", r.points_checked},
              {"union_clause", r.union_clause},
              {"antitone_clause", r.antitone_clause},
              {"infinitude_clause", r.infinitude_clause}};
  for (const auto& f : r.failures) c.finding(f);
}

void cmd_meet(Context& c) {
  const Conjunct cj = c.conjunct();
  const auto depth = static_cast<unsigned>(c.number("depth", 10, 0, 40));
  const auto v = meet_infinitude(cj);
  std::vector<BigInt> counts;
  json count_json = json::array();
  for (unsigned l = 0; l <= depth; ++l) {
    counts.push_back(point_count(cj, l));
    count_json.push_back(counts.back().get_str());
  }
  c.result = {{"kind", to_string(v.kind)}, {"reason", v.reason}, {"counts", count_json}};
  if (v.bound) c.result["bound"] = *v.bound;
  switch (v.kind) {
    case MeetKind::Empty:
      for (unsigned l = 0; l <= depth; ++l)
        if (counts[l] != 0) c.finding("Empty verdict but " + counts[l].get_str() + " points at level " + std::to_string(l));
      break;
    case MeetKind::Finite:
      for (unsigned l = *v.bound + 1; l <= depth; ++l)
        if (counts[l] != 0) c.finding("Finite verdict but points at level " + std::to_string(l));
      break;
    case MeetKind::Infinite: {
      c.result["from"] = v.from;
      json witnesses = json::array();
      for (unsigned m = v.from; m < v.from + 3; ++m) {
        const OmegaPoint p = v.witness(m);
        if (!eval(cj, p)) c.finding("witness at " + std::to_string(m) + " does not satisfy the meet");
        if (m <= 6) witnesses.push_back(point_json(p));
      }
      c.result["witnesses"] = witnesses;
      for (unsigned l = v.from; l <= depth; ++l)
        if (counts[l] == 0) c.finding("Infinite verdict but no point at level " + std::to_string(l));
      break;
    }
  }
}

void cmd_pibase(Context& c) {
  const auto& fam = c.family();
  const auto depth = static_cast<unsigned>(c.number("depth", 3, 0, 6));
  const auto elems = pibase_enum(fam.slaloms(), depth);
  c.result["count"] = elems.size();
  json list = json::array();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto& e = elems[i];
    if (!is_canonical(e)) c.finding("element " + std::to_string(i) + " is not canonical");
    if (meet_infinitude(e.conjunct()).kind != MeetKind::Infinite) c.finding("element " + std::to_string(i) + " is finite");
    if (i < 32) list.push_back({{"a", slalom_json(e.a)}, {"window", window_text(e.window)}});
  }
  c.result["elements"] = list;
}

void cmd_measure(Context& c) {
  const std::string mode = c.text("mode", "containment");
  if (mode == "mu") {
    const Conjunct cj = c.conjunct();
    const auto K = static_cast<unsigned>(c.number("K", 64, 1, 4096));
    const auto m = mu(AlgebraTerm{{cj}}, K);
    c.result = measure_json(m.value);
    c.result["strictly_positive"] = m.strictly_positive;
    c.result["summands"] = m.summands;
    return;
  }
  const std::string name_text = c.text("name", "generic");
  const SlalomName name = parse_name(name_text);
  if (mode == "containment") {
    c.result = measure_json(containment_measure(c.set(), name));
  } else if (mode == "term") {
    std::vector<Slalom> pos, neg;
    for (const auto& g : c.indexed("positive")) pos.push_back(resolve_member(c.config, g).slalom);
    for (const auto& g : c.indexed("negative")) neg.push_back(resolve_member(c.config, g).slalom);
    c.result = measure_json(term_measure(pos, neg, name));
  } else if (mode == "nu") {
    c.result = {{"value", rat(nu(name, c.conjunct()))}};
  } else {
    throw InputError("measure mode must be containment, term, nu or mu");
  }
}

void cmd_converge(Context& c) {
  const Slalom& w = c.set();
  const auto depth = static_cast<unsigned>(c.number("depth", 8, 1, 16));
  const auto samples = static_cast<unsigned>(c.number("samples", 16, 0, 10000));
  const auto seed = c.number("seed", 1);
  const auto r = converge_sweep(w, depth, samples, seed);
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"in_count", l.in_count.get_str()},
                      {"out_count", l.out_count.get_str()},
                      {"nu_in", rat(l.nu_in)},
                      {"nu_out", rat(l.nu_out)},
                      {"tail_bound", rat(l.tail_bound)},
                      {"ok", l.ok}});
  c.result = {{"levels", levels}, {"explicit_points", r.explicit_points}, {"sampled_points", r.sampled_points}};
  for (const auto& f : r.failures) c.finding(f);
}

void cmd_destruct_cert(Context& c) {
  const Slalom& w = c.set();
  const Rational eps = c.rational("epsilon", "1/2");
  const auto cert = destructibility_certificate(w, eps);
  c.result = {{"n", cert.n}, {"bound", rat(cert.bound)}};
  const Rational after = borel_cantelli_bound(w, cert.n + 1);
  if (!(after < eps)) c.finding("tail beyond n is " + rat(after) + ", not below epsilon");
  if (after != cert.bound) c.finding("reported bound differs from the recomputed tail " + rat(after));
  if (cert.n > 0 && borel_cantelli_bound(w, cert.n) < eps) c.finding("n is not minimal");
}

void cmd_borel_cantelli(Context& c) {
  const Slalom& w = c.set();
  const auto m = static_cast<unsigned>(c.number("m", 0, 0, 1000));
  c.result = {{"bound", rat(borel_cantelli_bound(w, m))}};
}

}  // namespace

namespace {

void cmd_kelley(Context& c) {
  std::vector<AlgebraTerm> terms;
  for (const auto& t : c.indexed("term")) {
    if (t.rfind("not ", 0) == 0)
      terms.push_back(AlgebraTerm::negated(parse_generator(c.config, t.substr(4))));
    else
      terms.push_back(AlgebraTerm::atom(parse_generator(c.config, t)));
  }
  if (terms.empty()) throw InputError("kelley needs term.0, term.1, ...");
  const auto K = static_cast<unsigned>(c.number("K", 3, 1, 6));
  c.result = {{"terms", terms.size()}, {"kelley", rat(kelley_number(terms, K))}};
}

void cmd_linked_partition(Context& c) {
  const auto& fam = c.family();
  const auto n = static_cast<unsigned>(c.number("n", 2, 2, 8));
  const auto r = linked_partition(fam.slaloms(), n);
  json buckets = json::object();
  for (const auto& [key, members] : r.buckets) buckets[key] = members;
  c.result = {{"arity", r.arity}, {"buckets", buckets}, {"subsets_checked", r.subsets_checked}};
  for (const auto& f : r.failures) c.finding(f);
}

void cmd_star_refine(Context& c) {
  const auto& fam = c.family();
  const auto horizon = static_cast<unsigned>(c.number("horizon", fam.horizon, 1, kMaxHorizon));
  const auto r = star_refine(fam.slaloms(), horizon);
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"n", s.n}, {"k", s.k}, {"k_next", s.k_next}, {"block", slalom_json(s.block)}, {"q_next", s.q_next}});
  c.result = {{"chosen", r.chosen}, {"v", slalom_json(r.v)}, {"k", r.k}, {"steps", steps}};
  for (const auto& f : r.failures) c.finding(f);
  if (classify(r.v, Ideal::S).status != Status::Yes) c.finding("union of the chosen members is not in S");
}

void cmd_diagonal(Context& c) {
  const auto& fam = c.family();
  const auto unions = fam.slaloms();
  const auto w = diagonal_witness(unions);
  c.result = {{"f", std::vector<std::uint64_t>(w.f.values().begin(), w.f.values().end())},
              {"escape_levels", w.escape_levels}};
  for (const unsigned n : w.escape_levels)
    if (unions[n].at(n).contains(w.f(n))) c.finding("f stays inside class union " + std::to_string(n) + " at level " +
                                                    std::to_string(n));
}

void cmd_centered_decomp(Context& c) {
  const Slalom& bound = c.set("bound");
  const auto& fam = c.family();
  std::vector<WindowGen> windows;
  for (const auto& w : c.indexed("window")) windows.push_back(parse_window(w));
  const auto d = centered_decomposition(bound, fam.slaloms(), windows);
  json classes = json::array();
  for (const auto& k : d.classes)
    classes.push_back({{"window", window_text(k.window)}, {"members", k.members}, {"centered", k.centered}});
  c.result = {{"classes", classes}};
  for (std::size_t i = 0; i < d.classes.size(); ++i)
    if (!d.classes[i].centered) c.finding("class " + std::to_string(i) + " is not centered");
}

void cmd_chain_step(Context& c) {
  const auto& fam = c.family();
  const PathReal f(parse_list(c.need("path")));
  const auto horizon = static_cast<unsigned>(c.number("horizon", 16, 1, 40));
  const auto r = chain_step(fam.slaloms(), f, horizon);
  json bounds = json::array();
  for (const auto& b : r.bounds) bounds.push_back(rat(b));
  c.result = {{"g", r.g},
              {"m_alphas", r.m_alphas},
              {"settle", r.settle},
              {"cutoff", r.cutoff},
              {"a", slalom_json(r.a)},
              {"a_sum", rat(r.a.partial_sum())},
              {"a_beta", slalom_json(r.a_beta)},
              {"window_bounds", bounds},
              {"input_sum", rat(r.input_sum)}};
  for (const auto& e : r.failures) c.finding(e);
}

std::vector<std::set<std::uint64_t>> subsets_from(Context& c, unsigned& r, std::uint64_t& universe,
                                                  std::uint64_t witnesses = 1) {
  r = static_cast<unsigned>(c.number("r", 3, 1, 20));
  universe = c.number("universe", witnesses << r, 1, std::uint64_t{1} << 24);
  return independent_subsets(r, universe, witnesses);
}

std::string pattern_text(unsigned r, std::uint64_t bits) {
  std::string s;
  for (unsigned a = 0; a < r; ++a) s += (bits >> a & 1) ? '+' : '-';
  return s;
}

void cmd_independent(Context& c) {
  const auto witnesses = c.number("witnesses", 1, 1, std::uint64_t{1} << 20);
  unsigned r;
  std::uint64_t universe;
  const auto xs = subsets_from(c, r, universe, witnesses);
  // Oracle: count the witnesses of every sign pattern directly.
  std::uint64_t least = UINT64_MAX;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << r); ++p) {
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < universe; ++x) {
      bool match = true;
      for (unsigned a = 0; a < r && match; ++a) match = xs[a].count(x) == ((p >> a & 1) == 1);
      count += match;
    }
    least = std::min(least, count);
    if (count < witnesses) c.finding("pattern " + pattern_text(r, p) + " has " + std::to_string(count) + " witnesses");
  }
  c.result = {{"universe", universe}, {"least_witnesses", least}};
  if (universe <= 64) c.result["subsets"] = xs;
}

struct Blocks {
  unsigned r = 0;
  std::uint64_t universe = 0;
  unsigned horizon = 0;
  BlockPair bp;
  std::vector<std::set<unsigned>> levels;
  std::vector<Slalom> alphas;
};

Blocks build_blocks(Context& c) {
  Blocks b;
  const auto xs = subsets_from(c, b.r, b.universe);
  b.horizon = static_cast<unsigned>(c.number("horizon", 16, 3, 40));
  b.bp = BlockPair::standard(b.horizon);
  for (const auto& x : xs) {
    b.levels.push_back(schedule_levels(x, b.universe, b.horizon));
    b.alphas.push_back(build_S_alpha(b.bp, b.levels.back()));
  }
  return b;
}

void cmd_s_alpha(Context& c) {
  const auto b = build_blocks(c);
  json rows = json::array();
  for (unsigned a = 0; a < b.r; ++a)
    rows.push_back({{"alpha", a}, {"levels", b.levels[a]}, {"s_alpha", slalom_json(b.alphas[a])}});
  c.result = {{"members", rows}, {"universe", b.universe}};
}

void cmd_independence_check(Context& c) {
  const auto b = build_blocks(c);
  const auto min_points = c.number("witnesses", 1, 0, 1000);
  std::vector<std::uint64_t> patterns;
  if (c.has("pattern")) {
    const std::string p = c.need("pattern");
    if (p.size() != b.r || p.find_first_not_of("+-") != std::string::npos)
      throw InputError("pattern must be " + std::to_string(b.r) + " characters from '+-'");
    std::uint64_t bits = 0;
    for (unsigned a = 0; a < b.r; ++a) bits |= std::uint64_t{p[a] == '+'} << a;
    patterns.push_back(bits);
  } else {
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << b.r); ++p) patterns.push_back(p);
  }
  json rows = json::array();
  json skipped = json::array();
  for (const auto bits : patterns) {
    Pattern pat;
    for (unsigned a = 0; a < b.r; ++a) (bits >> a & 1 ? pat.positive : pat.negative).push_back(a);
    const auto y = pattern_levels(b.levels, pat, b.horizon);
    const std::string name = pattern_text(b.r, bits);
    if (y.empty()) {
      skipped.push_back(name);
      continue;
    }
    const auto rep = independence_check(b.bp, b.alphas, pat, y, b.horizon);
    const auto valid = std::count_if(rep.points.begin(), rep.points.end(), [](const WitnessPoint& w) { return w.ok; });
    rows.push_back({{"pattern", name}, {"y", y}, {"points", rep.points.size()}, {"valid", valid}});
    if (!rep.ok()) c.finding("pattern " + name + ": invalid witness point");
    if (static_cast<std::uint64_t>(valid) < min_points)
      c.finding("pattern " + name + ": " + std::to_string(valid) + " valid points");
  }
  c.result = {{"patterns", rows}, {"skipped", skipped}};
}

void cmd_bounding_search(Context& c) {
  const auto& fam = c.family();
  const auto horizon = static_cast<unsigned>(c.number("horizon", fam.horizon, 1, kMaxHorizon));
  const auto r = bounding_search(fam.slaloms(), horizon);
  if (r.bound) c.result["bound"] = slalom_json(*r.bound);
  if (r.saturation) c.result["saturation"] = {{"level", r.saturation->level}, {"members", r.saturation->indices}};
}

QCondition condition_from(Context& c) {
  const WindowGen w = parse_window(c.need("condition"));
  const Slalom a = c.has("set") ? c.set() : Slalom(w.level);
  return canonicalize(a, w);
}

json cohen_json(const CohenCondition& s) {
  json out = json::object();
  for (const auto& [m, v] : s) out[std::to_string(m)] = v;
  return out;
}

void cmd_cohen_project(Context& c) {
  const QCondition p = condition_from(c);
  const auto depth = static_cast<unsigned>(c.number("depth", p.window.level + 3, 1, 8));
  c.result = {{"a", slalom_json(p.a)}, {"window", window_text(p.window)}, {"shortcut", cohen_json(cohen_shortcut(p))}};
  ProjectionOracle stats;
  try {
    c.result["projection"] = cohen_json(cohen_project(p, depth, &stats));
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::logic_error& e) {
    c.finding(e.what());
  }
  c.result["extensions"] = stats.extensions;
}

void cmd_verify_projection(Context& c) {
  const auto depth = static_cast<unsigned>(c.number("depth", 4, 2, 6));
  const auto r = verify_projection(depth);
  c.result = {{"conditions", r.conditions}, {"cohen_conditions", r.cohen_conditions}, {"exact_hits", r.exact_hits},
              {"order_pairs", r.order_pairs}, {"lifts", r.lifts},                     {"oracle_extensions", r.oracle_extensions}};
  for (const auto& f : r.failures) c.finding(f);
}

void cmd_mathias_embed(Context& c) {
  const QCondition p = condition_from(c);
  const auto m = mathias_embed(p);
  const auto upto = static_cast<unsigned>(c.number("depth", m.n + 3, 0, 40));
  c.result = {{"n", m.n}, {"s", m.s}, {"condition", m.str()}};
  if (!m.interval_hitting(upto)) c.finding("s ∪ F misses an interval below level " + std::to_string(upto));
}

void cmd_mathias_order_check(Context& c) {
  const auto depth = static_cast<unsigned>(c.number("depth", 3, 1, 5));
  const auto r = mathias_order_check(depth);
  c.result = {{"conditions", r.conditions}, {"pairs", r.pairs}, {"related", r.related}};
  for (const auto& f : r.failures) c.finding(f);
}

}  // namespace

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table = {
      {"classify", cmd_classify},
      {"localize", cmd_localize},
      {"omega-enum", cmd_omega_enum},
      {"fact-check", cmd_fact_check},
      {"meet", cmd_meet},
      {"pibase", cmd_pibase},
      {"measure", cmd_measure},
      {"converge", cmd_converge},
      {"destruct-cert", cmd_destruct_cert},
      {"borel-cantelli", cmd_borel_cantelli},
      {"kelley", cmd_kelley},
      {"linked-partition", cmd_linked_partition},
      {"star-refine", cmd_star_refine},
      {"diagonal", cmd_diagonal},
      {"centered-decomp", cmd_centered_decomp},
      {"chain-step", cmd_chain_step},
      {"independent", cmd_independent},
      {"s-alpha", cmd_s_alpha},
      {"independence-check", cmd_independence_check},
      {"bounding-search", cmd_bounding_search},
      {"cohen-project", cmd_cohen_project},
      {"verify-projection", cmd_verify_projection},
      {"mathias-embed", cmd_mathias_embed},
      {"mathias-order-check", cmd_mathias_order_check},
  };
  return table;
}

}  // namespace slalomlab::cli
