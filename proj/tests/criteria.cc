// Copyright (C) 2026 The scibrowse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "criteria.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "scibrowse/article_store.h"
#include "scibrowse/ingest.h"
#include "scibrowse/library.h"
#include "scibrowse/navigation.h"
#include "scibrowse/references.h"
#include "scibrowse/service.h"
#include "test_support.h"

namespace scibrowse::testing {
namespace {

constexpr char kCited[] = "10.9999/neuro.cited.0001";
constexpr char kCiting[] = "10.9999/neuro.citing.0002";
constexpr char kTopic[] = "light-induced neurodegeneration";

std::string RefId(int n) { return "R" + std::to_string(n); }

template <typename T>
const T& Pick(std::mt19937& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng)];
}

bool Chance(std::mt19937& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

int Uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<const InlineCitationMark*> Marks(const Article& a) {
  std::vector<const InlineCitationMark*> out;
  ForEachBlock(a, [&](const ContentBlock& b) {
    for (const auto& m : b.marks) out.push_back(&m);
  });
  return out;
}

// ---- graph oracles --------------------------------------------------------

using Edge = std::pair<std::string, std::string>;

bool HasCycle(const std::vector<std::string>& nodes, const std::vector<Edge>& edges) {
  std::map<std::string, std::vector<std::string>> out;
  std::map<std::string, int> indegree;
  for (const auto& n : nodes) indegree[n];
  for (const auto& [from, to] : edges) {
    out[from].push_back(to);
    ++indegree[to];
    indegree[from];
  }
  std::vector<std::string> ready;
  for (const auto& [n, d] : indegree) {
    if (d == 0) ready.push_back(n);
  }
  size_t seen = 0;
  while (!ready.empty()) {
    std::string n = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& m : out[n]) {
      if (--indegree[m] == 0) ready.push_back(m);
    }
  }
  return seen != indegree.size();
}

// Dimension name -> states reachable through type-of, by plain traversal.
std::map<std::string, std::set<std::string>> StatesOf(const KnowledgeBase& kb,
                                                      const std::string& class_id) {
  std::map<std::string, std::set<std::string>> out;
  std::set<std::string> seen;
  std::vector<std::string> stack = {class_id};
  while (!stack.empty()) {
    std::string c = stack.back();
    stack.pop_back();
    if (!seen.insert(c).second) continue;
    const EntityClass* cls = kb.FindClass(c);
    if (cls == nullptr) continue;
    for (const auto& d : cls->dimensions) {
      out[d.name].insert(d.states.begin(), d.states.end());
    }
    for (const auto& p : cls->parent_class_ids) stack.push_back(p);
  }
  return out;
}

std::optional<std::string> ClassFor(const KnowledgeBase& kb, const std::string& entity) {
  if (kb.classes().contains(entity)) return entity;
  auto it = kb.instances().find(entity);
  if (it != kb.instances().end()) return it->second.class_id;
  return std::nullopt;
}

bool Declared(const KnowledgeBase& kb, const std::string& entity,
              const std::string& dimension, const std::string& state) {
  auto cls = ClassFor(kb, entity);
  if (!cls) return false;
  auto states = StatesOf(kb, *cls);
  return states.contains(dimension) && states[dimension].contains(state);
}

// ---- random knowledgebase -------------------------------------------------

const std::vector<std::string> kDims = {"d0", "d1", "d2"};
const std::vector<std::string> kStates = {"s0", "s1", "s2", "s3"};

std::vector<std::string> Keys(const auto& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

std::vector<std::string> Entities(const KnowledgeBase& kb) {
  std::vector<std::string> out = Keys(kb.classes());
  for (const auto& k : Keys(kb.instances())) out.push_back(k);
  for (const auto& k : Keys(kb.systems())) out.push_back(k);
  return out;
}

std::vector<std::string> RandomSubset(std::mt19937& rng,
                                      const std::vector<std::string>& pool,
                                      int max_size) {
  std::vector<std::string> out;
  if (pool.empty()) return out;
  const int n = Uniform(rng, 0, max_size);
  for (int i = 0; i < n; ++i) {
    const std::string& p = Pick(rng, pool);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

Dimension RandomDimension(std::mt19937& rng, const std::string& name,
                          double corrupt_rate = 0.03) {
  Dimension d{name, {}, ""};
  for (const auto& s : kStates) {
    if (Chance(rng, 0.5)) d.states.push_back(s);
  }
  if (d.states.empty() || Chance(rng, corrupt_rate)) d.states.push_back(kStates[0]);
  return d;
}

// A state change on `entity`, valid when the entity has dimensions unless
// `corrupt`.
std::optional<StateChange> RandomChange(std::mt19937& rng, const KnowledgeBase& kb,
                                        const std::string& entity, bool corrupt) {
  auto cls = kb.ClassOf(entity);
  std::vector<Dimension> dims;
  if (cls) dims = kb.EffectiveDimensions(*cls);
  if (dims.empty()) {
    if (!corrupt) return std::nullopt;
    return StateChange{entity, "d0", std::nullopt, "s0"};
  }
  const Dimension& d = Pick(rng, dims);
  StateChange sc{entity, d.name, std::nullopt, Pick(rng, d.states)};
  if (Chance(rng, 0.5)) sc.from_state = Pick(rng, d.states);
  if (corrupt) sc.to_state = "undeclared";
  return sc;
}

Flow RandomFlow(std::mt19937& rng, const KnowledgeBase& kb, const std::string& id,
                double corrupt_rate) {
  Flow f;
  f.id = id;
  f.name = "flow " + id;
  f.kind = Chance(rng, 0.5) ? FlowKind::kConceptualModel : FlowKind::kMethodFlow;
  const bool model = f.kind == FlowKind::kConceptualModel;
  std::vector<std::string> pool = Keys(kb.classes());
  for (const auto& k : Keys(kb.systems())) pool.push_back(k);
  if (!model || Chance(rng, corrupt_rate)) {
    for (const auto& k : Keys(kb.instances())) pool.push_back(k);
  }
  static const std::vector<ParticipantRole> kRoles = {
      ParticipantRole::kCause, ParticipantRole::kAffected,
      ParticipantRole::kConsumed, ParticipantRole::kProduced,
      ParticipantRole::kResearcherAction, ParticipantRole::kMeasured};
  for (const auto& e : RandomSubset(rng, pool, 3)) {
    f.participants.push_back({e, Pick(rng, kRoles)});
  }
  for (const auto& p : f.participants) {
    if (!Chance(rng, 0.7)) continue;
    if (auto sc = RandomChange(rng, kb, p.entity, Chance(rng, corrupt_rate))) {
      f.effects.push_back(*sc);
    }
  }
  if (!f.participants.empty() && Chance(rng, 0.3)) {
    const std::string& subject = Pick(rng, f.participants).entity;
    if (auto sc = RandomChange(rng, kb, subject, Chance(rng, corrupt_rate))) {
      f.triggers.push_back({TriggerKind::kStatePredicate, subject, sc->dimension,
                            sc->to_state, ""});
    }
  }
  if (!model) f.triggers.push_back({TriggerKind::kResearcher, "", "", "", ""});
  return f;
}

// One random mutation attempt. Throws on rejection.
void RandomMutation(std::mt19937& rng, KnowledgeBase& kb, int serial,
                    int max_flows) {
  const std::string id = "e" + std::to_string(serial);
  const auto classes = Keys(kb.classes());
  const auto flows = Keys(kb.flows());
  int op = Uniform(rng, 0, 9);
  if (classes.empty()) op = 0;
  switch (op) {
    case 0:
    case 1: {
      EntityClass c;
      c.id = id;
      c.name = "class " + id;
      c.parent_class_ids = RandomSubset(rng, classes, 2);
      c.part_of_ids = RandomSubset(rng, classes, 1);
      for (const auto& d : RandomSubset(rng, kDims, 2)) {
        c.dimensions.push_back(RandomDimension(rng, d));
      }
      if (Chance(rng, 0.05)) c.parent_class_ids.push_back("missing");
      kb.AddClass(std::move(c));
      return;
    }
    case 2: {
      const Relation r = Chance(rng, 0.5) ? Relation::kTypeOf : Relation::kPartOf;
      kb.AddRelation(r, Pick(rng, classes), Pick(rng, classes));
      return;
    }
    case 3: {
      EntityInstance inst;
      inst.id = id;
      inst.class_id = Pick(rng, classes);
      for (const auto& d : kb.EffectiveDimensions(inst.class_id)) {
        if (Chance(rng, 0.6)) inst.state_assignments[d.name] = Pick(rng, d.states);
      }
      if (Chance(rng, 0.1)) inst.state_assignments["d0"] = "undeclared";
      kb.Instantiate(std::move(inst));
      return;
    }
    case 4: {
      SystemEntity s;
      s.id = id;
      s.name = "system " + id;
      s.component_entity_ids = RandomSubset(rng, Entities(kb), 3);
      s.underspecified = Chance(rng, 0.4);
      kb.AddSystem(std::move(s));
      return;
    }
    case 5:
    case 6:
      if (static_cast<int>(flows.size()) >= max_flows) {
        throw Error(ErrorCode::kInvalidArgument, "flow budget spent");
      }
      kb.DefineFlow(RandomFlow(rng, kb, id, 0.1));
      return;
    case 7:
      if (flows.empty()) throw Error(ErrorCode::kUnknownFlow, "no flows");
      kb.InstantiateFlow(Pick(rng, flows), id);
      return;
    case 8: {
      if (flows.empty()) throw Error(ErrorCode::kUnknownFlow, "no flows");
      ResearchQuestion rq;
      rq.id = id;
      rq.text = "question " + id;
      rq.kind = RqKind::kComparison;
      for (int i = Uniform(rng, 1, 3); i > 0; --i) {
        rq.model_ids.push_back(Pick(rng, flows));
      }
      if (Chance(rng, 0.4)) {
        rq.kind = RqKind::kAspectValue;
        rq.target = RqTarget{Pick(rng, classes), Pick(rng, kDims)};
      }
      kb.DefineRq(std::move(rq));
      return;
    }
    default: {
      if (flows.empty()) throw Error(ErrorCode::kUnknownFlow, "no flows");
      std::vector<std::string> members = RandomSubset(rng, flows, 4);
      if (members.empty()) members.push_back(flows[0]);
      std::vector<MeshEdge> edges;
      for (int i = Uniform(rng, 0, 5); i > 0; --i) {
        edges.push_back({Pick(rng, members), Pick(rng, members), "", false});
      }
      kb.BuildMesh(id, std::move(members), std::move(edges));
      return;
    }
  }
}

// ---- library fixtures -----------------------------------------------------

Span FindSpan(const Article& a, const std::string& block_id, const std::string& needle) {
  const std::string& text = GetBlock(a, block_id).text;
  const size_t at = text.find(needle);
  if (at == std::string::npos) {
    throw Error(ErrorCode::kUnknownSpan, needle + " not in " + block_id);
  }
  // Fixture blocks are ASCII, so byte and code point offsets agree.
  return {block_id, at, at + needle.size()};
}

struct Scenario {
  Library library;
  std::string anchor_id;
};

Scenario BuildScenario() {
  Scenario s;
  Library& lib = s.library;
  for (const char* n : {"neuro_cited.xml", "neuro_citing.xml"}) {
    lib.IngestXml(ReadFile(FixturePath(n)), n);
  }
  lib.ApplyCommands(kCited, Fig3Commands());
  lib.ApplyCommands("shared", {{"op", "add_instrument"}, {"id", "rig"}, {"name", "ERG rig"}});
  lib.ApplyCommands(
      kCited,
      Json::array({{{"op", "add_class"}, {"id", "photoreceptor"}, {"name", "photoreceptor"}},
                   {{"op", "define_flow"},
                    {"id", "erg"},
                    {"name", "ERG recording"},
                    {"kind", "method_flow"},
                    {"is_measurement", true},
                    {"participants", {{{"entity", "photoreceptor"}, {"role", "measured"}}}}},
                   {{"op", "attach_dataset"},
                    {"flow_id", "erg"},
                    {"instruments", {"rig"}},
                    {"datapoints",
                     {{{"values", {{"amplitude", "reduced"}}}, {"recorded_by", "rig"}}}}}}));
  const Article& cited = lib.GetArticle(kCited).article;
  const Span intro = FindSpan(cited, "s2.2/b0", kTopic);
  const Span late = FindSpan(cited, "s3/b0", kTopic);
  const Span mid = FindSpan(cited, "s2.2/b1", kTopic);
  s.anchor_id = lib.RegisterAnchor(kCited, intro, kTopic).id;
  lib.AddMention(s.anchor_id, late);
  lib.AddMention(s.anchor_id, mid);
  lib.LinkCitation(kCiting, "s1/b0/c0", s.anchor_id, "cites_as_evidence");
  return s;
}

}  // namespace

bool AcyclicByTraversal(const KnowledgeBase& kb, Relation relation) {
  std::vector<Edge> edges;
  for (const auto& [id, c] : kb.classes()) {
    const auto& targets =
        relation == Relation::kTypeOf ? c.parent_class_ids : c.part_of_ids;
    for (const auto& t : targets) edges.emplace_back(id, t);
  }
  return !HasCycle(Keys(kb.classes()), edges);
}

KnowledgeBase RandomKb(std::mt19937& rng, int steps, int max_flows, Verdict& verdict) {
  KnowledgeBase kb;
  int done = 0;
  for (int serial = 0; done < steps && serial < steps * 20; ++serial) {
    const KnowledgeBase before = kb;
    try {
      RandomMutation(rng, kb, serial, max_flows);
      ++done;
    } catch (const Error& e) {
      if (!(kb == before)) {
        verdict.Fail(std::string("rejected mutation changed the store: ") + e.what());
        kb = before;
      }
    }
  }
  if (done < steps) {
    verdict.Fail("only " + std::to_string(done) + " mutations succeeded");
  }
  return kb;
}

Verdict CheckPlosIngest(const std::vector<std::string>& fixtures) {
  Verdict v;
  std::ostringstream detail;
  static const std::regex kRefTag(R"(<ref[\s>])");
  for (const auto& name : fixtures) {
    const std::string xml = ReadFile(FixturePath(name));
    IngestResult r;
    try {
      r = Ingest({name, xml});
    } catch (const Error& e) {
      v.Fail(name + ": " + e.what());
      continue;
    }
    const Article& a = r.article;

    size_t max_level = 0;
    std::function<void(const std::vector<TocEntry>&)> walk =
        [&](const std::vector<TocEntry>& entries) {
          for (const auto& e : entries) {
            max_level = std::max(max_level, static_cast<size_t>(e.level));
            walk(e.children);
          }
        };
    walk(BuildToc(a));
    if (max_level > 2) v.Fail(name + ": TOC level " + std::to_string(max_level));

    const size_t list_start = xml.find("<ref-list");
    const size_t list_end = xml.find("</ref-list>");
    size_t expected = 0;
    if (list_start != std::string::npos && list_end != std::string::npos) {
      const std::string list = xml.substr(list_start, list_end - list_start);
      expected = std::distance(std::sregex_iterator(list.begin(), list.end(), kRefTag),
                               std::sregex_iterator());
    }
    if (a.references.size() != expected || expected == 0) {
      v.Fail(name + ": " + std::to_string(a.references.size()) + " references, source has " +
             std::to_string(expected));
    }

    size_t unresolved = 0;
    for (const auto* m : Marks(a)) {
      if (!SpanResolves(a, m->span)) v.Fail(name + ": mark " + m->id + " span does not resolve");
      if (!m->resolved) {
        ++unresolved;
        continue;
      }
      for (const auto& t : m->target_ref_ids) {
        if (FindReference(a, t) == nullptr) v.Fail(name + ": mark " + m->id + " -> " + t);
      }
    }
    size_t dangling = 0;
    for (const auto& w : r.report.warnings) dangling += w.code == "DanglingCitation";
    if (unresolved != 0 && dangling == 0) {
      v.Fail(name + ": unresolved marks without warnings");
    }
    detail << name << " refs=" << a.references.size() << " marks=" << CountMarks(a)
           << " warnings=" << r.report.warnings.size() << "; ";
  }
  if (v.pass) v.detail = detail.str();
  return v;
}

Verdict CheckGroupedSplitting(int articles, uint32_t seed) {
  Verdict v;
  std::mt19937 rng(seed);
  size_t grouped = 0;
  for (int i = 0; i < articles && v.pass; ++i) {
    const GeneratedArticle g = GenerateArticle(rng);
    const std::string tag = "article " + std::to_string(i) + ": ";
    const Article parsed = ParseArticle({"gen", g.xml});
    const auto marks = Marks(parsed);
    if (marks.size() != g.citations.size()) {
      v.Fail(tag + std::to_string(marks.size()) + " marks, expected " +
             std::to_string(g.citations.size()));
      continue;
    }
    for (size_t k = 0; k < marks.size(); ++k) {
      const auto& want = g.citations[k];
      std::set<std::string> targets(marks[k]->target_ref_ids.begin(),
                                    marks[k]->target_ref_ids.end());
      std::set<std::string> expected;
      for (int n : want.numbers) expected.insert(RefId(n));
      if (marks[k]->span.block_id != want.block_id ||
          ResolveSpan(parsed, marks[k]->span) != want.display || targets != expected) {
        v.Fail(tag + "mark " + marks[k]->id + " designates the wrong references");
      }
      grouped += expected.size() > 1;
    }

    const Article split = SplitGroupedCitations(parsed);
    for (const auto* m : Marks(split)) {
      if (m->target_ref_ids.size() != 1) v.Fail(tag + m->id + " still grouped");
    }
    if (MarkPairs(split) != MarkPairs(parsed)) v.Fail(tag + "(position, reference) pairs changed");
    if (!(SplitGroupedCitations(split) == split)) v.Fail(tag + "splitting is not idempotent");
    // Split marks of one group follow ascending original number.
    const auto after = Marks(split);
    for (size_t k = 1; k < after.size(); ++k) {
      if (after[k]->span == after[k - 1]->span &&
          FindReference(split, after[k]->target_ref_ids[0])->original_number <
              FindReference(split, after[k - 1]->target_ref_ids[0])->original_number) {
        v.Fail(tag + "split marks out of number order at " + after[k]->id);
      }
    }
  }
  if (v.pass) {
    v.detail = std::to_string(articles) + " articles, " + std::to_string(grouped) +
               " grouped marks";
  }
  return v;
}

Verdict CheckReferenceToggle(int articles, uint32_t seed) {
  Verdict v;
  std::mt19937 rng(seed);
  for (int i = 0; i < articles && v.pass; ++i) {
    const GeneratedArticle g = GenerateArticle(rng);
    const std::string tag = "article " + std::to_string(i) + ": ";
    const Article a = Ingest({"gen", g.xml}).article;

    std::vector<std::string> want_appearance;
    std::set<int> seen;
    for (const auto& c : g.citations) {
      for (int n : c.numbers) {
        if (seen.insert(n).second) want_appearance.push_back(RefId(n));
      }
    }
    for (int n = 1; n <= g.reference_count; ++n) {
      if (!seen.contains(n)) want_appearance.push_back(RefId(n));
    }
    std::vector<std::string> want_alpha;
    for (int n : g.alphabetical) want_alpha.push_back(RefId(n));

    const ReferenceOrder app = OrderByAppearance(a);
    const ReferenceOrder alpha = OrderAlphabetical(a);
    if (app.sequence != want_appearance) v.Fail(tag + "appearance order");
    if (alpha.sequence != want_alpha) v.Fail(tag + "alphabetical order");
    auto sorted = [](std::vector<std::string> s) {
      std::sort(s.begin(), s.end());
      return s;
    };
    if (sorted(app.sequence) != sorted(alpha.sequence)) v.Fail(tag + "orders differ as sets");

    const RenumberResult r1 = Renumber(a, app);
    const RenumberResult r2 = Renumber(r1.article, alpha);
    const RenumberResult r3 = Renumber(r2.article, app);
    for (const auto* r : {&r1, &r2}) {
      if (!r->map.IsBijection(g.reference_count)) v.Fail(tag + "renumber map not a bijection");
    }
    if (!(r3.article == r1.article)) v.Fail(tag + "toggling back changed the display");
    if (MarkPairs(r2.article) != MarkPairs(a)) v.Fail(tag + "targets changed");

    // Display numbers equal positions in the chosen order; first
    // occurrences under appearance order count up from 1.
    std::map<std::string, int> position;
    for (size_t k = 0; k < alpha.sequence.size(); ++k) position[alpha.sequence[k]] = k + 1;
    int next = 1;
    std::set<std::string> first;
    for (const auto* m : Marks(r2.article)) {
      if (m->display_number != position[m->target_ref_ids[0]]) {
        v.Fail(tag + m->id + " display does not match alphabetical position");
      }
    }
    for (const auto* m : Marks(r1.article)) {
      if (first.insert(m->target_ref_ids[0]).second && m->display_number != next++) {
        v.Fail(tag + m->id + " first occurrence out of sequence");
      }
    }
  }
  if (v.pass) v.detail = std::to_string(articles) + " articles toggled both ways";
  return v;
}

Verdict CheckKbInvariants(int mutations, uint32_t seed) {
  Verdict v;
  std::mt19937 rng(seed);
  KnowledgeBase kb = RandomKb(rng, mutations, 60, v);
  if (!AcyclicByTraversal(kb, Relation::kTypeOf)) v.Fail("type-of graph has a cycle");
  if (!AcyclicByTraversal(kb, Relation::kPartOf)) v.Fail("part-of graph has a cycle");
  if (!kb.RelationGraphsAcyclic()) v.Fail("store reports a cycle");

  size_t models = 0;
  for (const auto& [id, f] : kb.flows()) {
    KnowledgeBase probe = kb;
    if (f.kind == FlowKind::kConceptualModel) {
      ++models;
      try {
        probe.InstantiateFlow(id);
        v.Fail("model " + id + " was instantiated");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kConceptualModelNotInstantiable) {
          v.Fail("model " + id + ": " + e.what());
        }
      }
    } else {
      try {
        probe.DefineRq({"", RqKind::kComparison, "q", {id, id}, {}, {}, {}});
        v.Fail("question over method flow " + id + " accepted");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kMethodFlowNotQuestionable) {
          v.Fail("method flow " + id + ": " + e.what());
        }
      }
    }
    for (const auto& effect : f.effects) {
      if (const auto* sc = std::get_if<StateChange>(&effect)) {
        if (!Declared(kb, sc->entity, sc->dimension, sc->to_state) ||
            (sc->from_state && !Declared(kb, sc->entity, sc->dimension, *sc->from_state))) {
          v.Fail("flow " + id + " uses an undeclared state");
        }
      }
    }
  }
  for (const auto& [id, fi] : kb.flow_instances()) {
    const Flow* f = kb.FindFlow(fi.flow_id);
    if (f == nullptr || f->kind != FlowKind::kMethodFlow) {
      v.Fail("flow instance " + id + " is not of a method flow");
    }
  }
  for (const auto& [id, rq] : kb.research_questions()) {
    for (const auto& m : rq.model_ids) {
      const Flow* f = kb.FindFlow(m);
      if (f == nullptr || f->kind != FlowKind::kConceptualModel) {
        v.Fail("question " + id + " wraps non-model " + m);
      }
    }
  }
  for (const auto& [id, inst] : kb.instances()) {
    for (const auto& [dim, state] : inst.state_assignments) {
      if (!Declared(kb, id, dim, state)) v.Fail("instance " + id + " has undeclared state");
    }
  }
  if (v.pass) {
    std::ostringstream d;
    d << mutations << " mutations: " << kb.classes().size() << " classes, "
      << kb.flows().size() << " flows (" << models << " models), "
      << kb.flow_instances().size() << " executions, "
      << kb.research_questions().size() << " questions";
    v.detail = d.str();
  }
  return v;
}

Verdict CheckDeterminantsBruteForce(int max_flows, uint32_t seed) {
  Verdict v;
  std::mt19937 rng(seed);
  size_t queries = 0;
  for (int n = 0; n <= max_flows && v.pass; ++n) {
    KnowledgeBase kb;
    for (int c = 0; c < 6; ++c) {
      EntityClass cls;
      cls.id = "k" + std::to_string(c);
      cls.name = cls.id;
      if (c > 0 && Chance(rng, 0.5)) cls.parent_class_ids = {"k" + std::to_string(Uniform(rng, 0, c - 1))};
      for (const auto& d : RandomSubset(rng, kDims, 2)) {
        cls.dimensions.push_back(RandomDimension(rng, d, 0));
      }
      kb.AddClass(std::move(cls));
    }
    for (int i = 0; i < 4; ++i) {
      kb.Instantiate({"i" + std::to_string(i), Pick(rng, Keys(kb.classes())), {}, {}, {}});
    }
    kb.AddSystem({"sys", "system", {"k0", "i0"}, false, ""});
    for (int f = 0; f < n; ++f) {
      kb.DefineFlow(RandomFlow(rng, kb, "f" + std::to_string(Uniform(rng, 0, 999)) +
                                            "_" + std::to_string(f), 0));
    }

    std::vector<std::string> flow_order = Keys(kb.flows());
    std::shuffle(flow_order.begin(), flow_order.end(), rng);
    for (const auto& entity : Entities(kb)) {
      for (const auto& dim : kDims) {
        std::vector<std::tuple<std::string, size_t, std::string>> want;
        for (const auto& fid : flow_order) {
          const Flow& f = kb.flows().at(fid);
          bool changes = false;
          for (const auto& e : f.effects) {
            const auto* sc = std::get_if<StateChange>(&e);
            changes = changes || (sc && sc->entity == entity && sc->dimension == dim);
          }
          if (!changes) continue;
          bool any_cause = false;
          for (size_t p = 0; p < f.participants.size(); ++p) {
            if (f.participants[p].role == ParticipantRole::kCause) {
              want.emplace_back(fid, p, f.participants[p].entity);
              any_cause = true;
            }
          }
          if (!any_cause) want.emplace_back(fid, 0, "");
        }
        std::sort(want.begin(), want.end());
        std::vector<Determinant> expected;
        for (const auto& [fid, p, cause] : want) expected.push_back({fid, cause});
        ++queries;
        if (kb.QueryDeterminants(entity, dim) != expected) {
          v.Fail(std::to_string(n) + " flows: determinants of " + entity + "." + dim);
        }
      }
    }
    try {
      kb.QueryDeterminants("nobody", "d0");
      v.Fail("unknown entity accepted");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnknownEntity) v.Fail(e.what());
    }
  }
  if (v.pass) {
    v.detail = std::to_string(queries) + " queries over 0.." + std::to_string(max_flows) + " flows";
  }
  return v;
}

Verdict CheckMeshMinimality(int meshes, uint32_t seed) {
  Verdict v;
  std::mt19937 rng(seed);
  KnowledgeBase kb;
  std::vector<std::string> flows;
  for (int i = 0; i < 8; ++i) {
    Flow f;
    f.id = "f" + std::to_string(i);
    f.name = f.id;
    kb.DefineFlow(f);
    flows.push_back(f.id);
  }
  size_t knots = 0;
  for (int i = 0; i < meshes && v.pass; ++i) {
    std::vector<std::string> members = flows;
    std::shuffle(members.begin(), members.end(), rng);
    members.resize(Uniform(rng, 1, 8));
    std::vector<MeshEdge> input;
    for (int e = Uniform(rng, 0, 16); e > 0; --e) {
      input.push_back({Pick(rng, members), Pick(rng, members), "", Chance(rng, 0.3)});
    }
    const Mesh& mesh = kb.BuildMesh("m" + std::to_string(i), members, input);
    const std::string tag = mesh.id + ": ";
    if (mesh.edges.size() != input.size()) {
      v.Fail(tag + "edges dropped");
      continue;
    }
    std::vector<Edge> kept;
    std::vector<Edge> knot;
    for (size_t e = 0; e < input.size(); ++e) {
      if (mesh.edges[e].from != input[e].from || mesh.edges[e].to != input[e].to) {
        v.Fail(tag + "edges reordered");
      }
      (mesh.edges[e].knot ? knot : kept).emplace_back(mesh.edges[e].from, mesh.edges[e].to);
    }
    knots += knot.size();
    if (HasCycle(members, kept)) v.Fail(tag + "cycle left after removing knots");
    // Keeping any non-empty subset of knots must leave a cycle. Singletons
    // settle it; small sets are also checked exhaustively.
    const size_t limit = knot.size() <= 10 ? (size_t{1} << knot.size()) : knot.size() + 1;
    for (size_t mask = 1; mask < limit; ++mask) {
      std::vector<Edge> graph = kept;
      if (knot.size() <= 10) {
        for (size_t k = 0; k < knot.size(); ++k) {
          if (mask & (size_t{1} << k)) graph.push_back(knot[k]);
        }
      } else {
        graph.push_back(knot[mask - 1]);
      }
      if (!HasCycle(members, graph)) v.Fail(tag + "a knot is not needed");
    }
  }
  if (v.pass) v.detail = std::to_string(meshes) + " meshes, " + std::to_string(knots) + " knots";
  return v;
}

Verdict CheckFig3Golden(const std::string& golden_path) {
  Verdict v;
  auto build = [] {
    KnowledgeBase kb;
    for (const auto& cmd : Fig3Commands()) ApplyKbCommand(nullptr, kb, nullptr, cmd);
    return kb;
  };
  const KnowledgeBase kb = build();
  const std::vector<Determinant> want = {{"fig3_nad_dependent", "NMNAT"}};
  if (kb.QueryDeterminants("NAD", "availability") != want) {
    v.Fail("determinants of NAD availability");
  }
  const auto& rqs = kb.research_questions();
  if (!rqs.contains("rq_nad_dependence") ||
      rqs.at("rq_nad_dependence").model_ids !=
          std::vector<std::string>{"fig3_nad_dependent", "fig3_nad_independent"}) {
    v.Fail("comparison question does not hold both models");
  }
  const std::string first = CanonicalDump(kb.ToJson());
  const std::string second = CanonicalDump(build().ToJson());
  if (first != second) v.Fail("knowledgebase JSON differs between runs");
  if (!(KnowledgeBase::FromJson(Json::parse(first)) == kb)) v.Fail("JSON round trip");
  if (std::getenv("SCIBROWSE_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(golden_path, std::ios::binary | std::ios::trunc) << first;
  }
  std::string golden;
  try {
    golden = ReadFile(golden_path);
  } catch (...) {
  }
  if (golden != first) {
    std::ofstream(golden_path + ".actual", std::ios::binary | std::ios::trunc) << first;
    v.Fail("golden mismatch; actual output written next to " + golden_path);
  }
  if (v.pass) v.detail = std::to_string(first.size()) + " bytes, stable across runs";
  return v;
}

Verdict CheckAnchorScenario() {
  Verdict v;
  Scenario s = BuildScenario();
  const Library& lib = s.library;
  const Article& cited = lib.GetArticle(kCited).article;
  const ContextSummary sum = lib.Summarize(s.anchor_id);

  if (sum.entries.empty() || sum.entries[0].kind != SummaryEntryKind::kFirstIntroduction ||
      !sum.entries[0].span || sum.entries[0].span->block_id != "s2.2/b0") {
    v.Fail("first entry is not the introducing span");
  }
  std::vector<std::string> later;
  for (const auto& e : sum.entries) {
    if (e.kind == SummaryEntryKind::kLaterMention) later.push_back(e.span->block_id);
    if (e.span && e.excerpt != ResolveSpan(cited, *e.span)) v.Fail("excerpt differs from span text");
  }
  if (later != std::vector<std::string>{"s2.2/b1", "s3/b0"}) v.Fail("later mentions out of order");
  bool in_abstract = false;
  for (const auto& b : cited.abstract) in_abstract |= b.text.find(kTopic) != std::string::npos;
  if (in_abstract) v.Fail("fixture abstract mentions the topic");
  if (sum.entries.empty() || sum.entries.back().kind != SummaryEntryKind::kAbstractPresence ||
      sum.entries.back().present) {
    v.Fail("abstract presence not reported as absent");
  }

  const std::string bytes = CanonicalDump(ToJson(sum));
  if (CanonicalDump(ToJson(lib.Summarize(s.anchor_id))) != bytes) v.Fail("summary differs between calls");
  const auto dir = TempDir("acceptance-anchor");
  lib.Save(dir);
  if (CanonicalDump(ToJson(Library::Load(dir).Summarize(s.anchor_id))) != bytes) {
    v.Fail("summary differs after reload");
  }
  if (CanonicalDump(ToJson(BuildScenario().library.Summarize(s.anchor_id))) != bytes) {
    v.Fail("summary differs between builds");
  }
  if (lib.Backlinks(kCited).size() != 1) v.Fail("backlink missing");
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = std::to_string(sum.entries.size()) + " entries, topic absent from abstract";
  return v;
}

Verdict CheckPersistence() {
  Verdict v;
  Scenario s = BuildScenario();
  Library& lib = s.library;
  const auto dir = TempDir("acceptance-persist");
  lib.Save(dir);
  const Library back = Library::Load(dir);
  if (back.Files() != lib.Files() || back.StateHash() != lib.StateHash()) v.Fail("reload differs");
  for (const auto& [path, text] : lib.Files()) {
    if (ReadFile(dir / path) != text) v.Fail("file on disk differs: " + path);
  }
  std::string log;
  for (const auto& line : lib.command_log()) log += line + "\n";
  if (Library::Replay(log).Files() != lib.Files()) v.Fail("replay is not byte-identical");

  lib.ApplyCommands(kCited, {{"op", "add_class"},
                             {"id", "retina"},
                             {"name", "retina"},
                             {"dimensions", {{{"name", "health"}, {"states", {"intact", "degenerated"}}}}}});
  lib.ApplyCommands(kCiting, {{"op", "add_class"},
                              {"id", "retina"},
                              {"name", "retina"},
                              {"dimensions", {{{"name", "health"}, {"states", {"swollen"}}}}}});
  LintReport conflict = lib.ConsistencyLint();
  if (conflict.conflicts.size() != 1 || conflict.conflicts[0].class_name != "retina") {
    v.Fail("state conflict not reported");
  }
  lib.RemoveArticle(kCited);
  LintReport gone = lib.ConsistencyLint();
  bool dangling_anchor = false;
  for (const auto& d : gone.dangling) dangling_anchor |= d.kind == "anchor" && d.id == s.anchor_id;
  if (!dangling_anchor) v.Fail("dangling anchor not reported");
  std::filesystem::remove_all(dir);
  if (v.pass) {
    v.detail = std::to_string(lib.command_log().size()) + " logged commands replayed; lint found " +
               std::to_string(conflict.conflicts.size()) + " conflict and " +
               std::to_string(gone.dangling.size()) + " dangling";
  }
  return v;
}

Verdict CheckServiceReadOnly(int gets) {
  Verdict v;
  Scenario s = BuildScenario();
  Service service(std::move(s.library));
  const std::string cited = std::string("/articles/") + kCited;
  const std::string citing = std::string("/articles/") + kCiting;
  const std::vector<HttpRequest> requests = {
      {"GET", "/articles", {}, ""},
      {"GET", cited, {}, ""},
      {"GET", cited + "/toc", {{"selected", "s2"}}, ""},
      {"GET", cited + "/toc", {}, ""},
      {"GET", cited + "/references", {{"order", "appearance"}}, ""},
      {"GET", citing + "/references", {{"order", "alphabetical"}}, ""},
      {"GET", cited + "/references", {{"order", "original"}}, ""},
      {"GET", cited + "/blocks", {}, ""},
      {"GET", cited + "/model", {}, ""},
      {"GET", cited + "/backlinks", {}, ""},
      {"GET", "/anchors/" + s.anchor_id + "/context", {}, ""},
      {"GET", "/instruments/rig/usages", {}, ""},
      {"GET", "/articles/missing/toc", {}, ""}};
  const std::string before = service.StateHash();
  std::map<int, int> statuses;
  for (int i = 0; i < gets; ++i) {
    ++statuses[service.Handle(requests[i % requests.size()]).status];
  }
  if (service.StateHash() != before) v.Fail("GET requests changed the library");
  if (statuses[200] + statuses[404] != gets) v.Fail("unexpected status");

  for (const char* mode : {"appearance", "alphabetical", "original"}) {
    HttpResponse r = service.Handle({"GET", cited + "/references", {{"order", mode}}, ""});
    Json j = Json::parse(r.body);
    RenumberMap map;
    for (const auto& p : j["renumber_map"]) {
      map.pairs[p["original_number"].get<int>()] = p["display_number"].get<int>();
    }
    if (r.status != 200 || !map.IsBijection(static_cast<int>(j["references"].size()))) {
      v.Fail(std::string("renumber map for ") + mode + " is not a bijection");
    }
  }
  if (v.pass) {
    v.detail = std::to_string(gets) + " GETs, hash unchanged (" + std::to_string(statuses[404]) +
               " expected 404s)";
  }
  return v;
}

}  // namespace scibrowse::testing
