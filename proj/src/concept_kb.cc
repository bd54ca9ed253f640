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

#include "scibrowse/concept_kb.h"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace scibrowse {

std::string_view Name(ModeledAs v) {
  return v == ModeledAs::kEntity ? "entity" : "process_alias";
}

std::string_view Name(Confidence v) {
  switch (v) {
    case Confidence::kAsserted: return "asserted";
    case Confidence::kInferred: return "inferred";
    case Confidence::kUnknown: return "unknown";
  }
  return "asserted";
}

std::string_view Name(FlowKind v) {
  return v == FlowKind::kMethodFlow ? "method_flow" : "conceptual_model";
}

std::string_view Name(ParticipantRole v) {
  switch (v) {
    case ParticipantRole::kCause: return "cause";
    case ParticipantRole::kAffected: return "affected";
    case ParticipantRole::kConsumed: return "consumed";
    case ParticipantRole::kProduced: return "produced";
    case ParticipantRole::kResearcherAction: return "researcher_action";
    case ParticipantRole::kMeasured: return "measured";
  }
  return "affected";
}

std::string_view Name(TriggerKind v) {
  switch (v) {
    case TriggerKind::kStatePredicate: return "state_predicate";
    case TriggerKind::kProximity: return "proximity";
    case TriggerKind::kResearcher: return "researcher";
  }
  return "researcher";
}

std::string_view Name(RqKind v) {
  return v == RqKind::kAspectValue ? "aspect_value" : "comparison";
}

std::string_view Name(HypothesisStatus v) {
  switch (v) {
    case HypothesisStatus::kProposed: return "proposed";
    case HypothesisStatus::kConfirmed: return "confirmed";
    case HypothesisStatus::kRejected: return "rejected";
  }
  return "proposed";
}

std::string_view Name(DiscourseType v) {
  switch (v) {
    case DiscourseType::kDesignRationale: return "design_rationale";
    case DiscourseType::kJustification: return "justification";
    case DiscourseType::kBackground: return "background";
    case DiscourseType::kOther: return "other";
  }
  return "other";
}

std::string_view Name(Relation v) {
  return v == Relation::kTypeOf ? "type_of" : "part_of";
}

std::string_view Name(ElementKind v) {
  switch (v) {
    case ElementKind::kClass: return "class";
    case ElementKind::kInstance: return "instance";
    case ElementKind::kSystem: return "system";
    case ElementKind::kFlow: return "flow";
    case ElementKind::kFlowInstance: return "flow_instance";
    case ElementKind::kMesh: return "mesh";
    case ElementKind::kResearchQuestion: return "research_question";
    case ElementKind::kHypothesis: return "hypothesis";
    case ElementKind::kDataSet: return "dataset";
    case ElementKind::kInstrument: return "instrument";
    case ElementKind::kComment: return "comment";
  }
  return "class";
}

std::optional<Relation> ParseRelation(std::string_view name) {
  if (name == "type_of") return Relation::kTypeOf;
  if (name == "part_of") return Relation::kPartOf;
  return std::nullopt;
}

// ---- Mesh

std::vector<MeshEdge> Mesh::KnotEdges() const {
  std::vector<MeshEdge> out;
  for (const auto& e : edges) {
    if (e.knot) out.push_back(e);
  }
  return out;
}

size_t Mesh::ComponentCount() const {
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < flow_ids.size(); ++i) index.emplace(flow_ids[i], i);
  std::vector<size_t> parent(flow_ids.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  size_t components = flow_ids.size();
  for (const auto& e : edges) {
    auto a = index.find(e.from);
    auto b = index.find(e.to);
    if (a == index.end() || b == index.end()) continue;
    size_t ra = find(a->second), rb = find(b->second);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

// ---- KnowledgeBase: lookups

const Flow* KnowledgeBase::FindFlow(const std::string& id) const {
  auto it = flows_.find(id);
  return it == flows_.end() ? nullptr : &it->second;
}

const EntityClass* KnowledgeBase::FindClass(const std::string& id) const {
  auto it = classes_.find(id);
  return it == classes_.end() ? nullptr : &it->second;
}

std::optional<ElementKind> KnowledgeBase::KindOf(const std::string& id) const {
  if (classes_.contains(id)) return ElementKind::kClass;
  if (instances_.contains(id)) return ElementKind::kInstance;
  if (systems_.contains(id)) return ElementKind::kSystem;
  if (flows_.contains(id)) return ElementKind::kFlow;
  if (flow_instances_.contains(id)) return ElementKind::kFlowInstance;
  if (meshes_.contains(id)) return ElementKind::kMesh;
  if (rqs_.contains(id)) return ElementKind::kResearchQuestion;
  if (hypotheses_.contains(id)) return ElementKind::kHypothesis;
  if (datasets_.contains(id)) return ElementKind::kDataSet;
  if (instruments_.contains(id)) return ElementKind::kInstrument;
  if (comments_.contains(id)) return ElementKind::kComment;
  return std::nullopt;
}

bool KnowledgeBase::IsEntity(const std::string& id) const {
  return classes_.contains(id) || instances_.contains(id) ||
         systems_.contains(id);
}

std::optional<std::string> KnowledgeBase::ClassOf(
    const std::string& entity_id) const {
  if (classes_.contains(entity_id)) return entity_id;
  auto it = instances_.find(entity_id);
  if (it != instances_.end()) return it->second.class_id;
  return std::nullopt;
}

const std::vector<std::string>& KnowledgeBase::Edges(const EntityClass& c,
                                                     Relation relation) const {
  return relation == Relation::kTypeOf ? c.parent_class_ids : c.part_of_ids;
}

std::vector<Dimension> KnowledgeBase::EffectiveDimensions(
    const std::string& class_id) const {
  std::vector<Dimension> out;
  std::unordered_set<std::string> visited;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (!visited.insert(id).second) return;
    const EntityClass* c = FindClass(id);
    if (c == nullptr) return;
    for (const auto& p : c->parent_class_ids) visit(p);
    for (const auto& d : c->dimensions) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const Dimension& x) { return x.name == d.name; });
      if (it == out.end()) {
        out.push_back(d);
        continue;
      }
      for (const auto& s : d.states) {
        if (std::find(it->states.begin(), it->states.end(), s) ==
            it->states.end()) {
          it->states.push_back(s);
        }
      }
      if (it->context_note.empty()) it->context_note = d.context_note;
    }
  };
  visit(class_id);
  return out;
}

bool KnowledgeBase::StateDeclared(const std::string& entity_id,
                                  const std::string& dimension,
                                  const std::string& state) const {
  auto cls = ClassOf(entity_id);
  if (!cls) return false;
  for (const auto& d : EffectiveDimensions(*cls)) {
    if (d.name != dimension) continue;
    return std::find(d.states.begin(), d.states.end(), state) != d.states.end();
  }
  return false;
}

bool KnowledgeBase::Reaches(Relation relation, const std::string& from,
                            const std::string& to) const {
  std::unordered_set<std::string> seen;
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    if (cur == to) return true;
    if (!seen.insert(cur).second) continue;
    const EntityClass* c = FindClass(cur);
    if (c == nullptr) continue;
    for (const auto& next : Edges(*c, relation)) stack.push_back(next);
  }
  return false;
}

std::set<std::string> KnowledgeBase::Closure(Relation relation,
                                             const std::string& class_id) const {
  const EntityClass* start = FindClass(class_id);
  if (start == nullptr) {
    throw Error(ErrorCode::kUnknownClass, "unknown class '" + class_id + "'");
  }
  std::set<std::string> out;
  std::deque<std::string> queue(Edges(*start, relation).begin(),
                                Edges(*start, relation).end());
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    if (cur == class_id || !out.insert(cur).second) continue;
    if (const EntityClass* c = FindClass(cur)) {
      for (const auto& next : Edges(*c, relation)) queue.push_back(next);
    }
  }
  return out;
}

bool KnowledgeBase::RelationGraphsAcyclic() const {
  for (Relation relation : {Relation::kTypeOf, Relation::kPartOf}) {
    // 0 = unvisited, 1 = on stack, 2 = done.
    std::unordered_map<std::string, int> color;
    std::function<bool(const std::string&)> dfs = [&](const std::string& id) {
      color[id] = 1;
      const EntityClass* c = FindClass(id);
      if (c != nullptr) {
        for (const auto& next : Edges(*c, relation)) {
          int col = color[next];
          if (col == 1) return false;
          if (col == 0 && !dfs(next)) return false;
        }
      }
      color[id] = 2;
      return true;
    };
    for (const auto& [id, c] : classes_) {
      if (color[id] == 0 && !dfs(id)) return false;
    }
  }
  return true;
}

std::vector<Determinant> KnowledgeBase::QueryDeterminants(
    const std::string& entity_id, const std::string& dimension) const {
  if (!IsEntity(entity_id)) {
    throw Error(ErrorCode::kUnknownEntity, "unknown entity '" + entity_id + "'");
  }
  std::vector<Determinant> out;
  for (const auto& [id, flow] : flows_) {
    bool hit = false;
    for (const auto& effect : flow.effects) {
      const auto* sc = std::get_if<StateChange>(&effect);
      if (sc != nullptr && sc->entity == entity_id &&
          sc->dimension == dimension) {
        hit = true;
      }
    }
    if (!hit) continue;
    bool any_cause = false;
    for (const auto& p : flow.participants) {
      if (p.role != ParticipantRole::kCause) continue;
      out.push_back({id, p.entity});
      any_cause = true;
    }
    if (!any_cause) out.push_back({id, ""});
  }
  return out;
}

// ---- KnowledgeBase: mutations

std::string KnowledgeBase::NewId(std::string_view prefix) {
  for (;;) {
    std::string id = std::string(prefix) + "-" + std::to_string(next_sequence_++);
    if (!KindOf(id)) return id;
  }
}

void KnowledgeBase::RequireFreshId(const std::string& id) const {
  if (auto kind = KindOf(id)) {
    throw Error(ErrorCode::kDuplicateId, "id '" + id + "' is already used by a " +
                                             std::string(Name(*kind)));
  }
}

void KnowledgeBase::RequireEntity(const std::string& id, ErrorCode code) const {
  if (!IsEntity(id)) {
    throw Error(code, "'" + id + "' is not a known entity");
  }
}

void KnowledgeBase::ValidateDimensions(const std::vector<Dimension>& dims) const {
  std::set<std::string> names;
  for (const auto& d : dims) {
    if (d.name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "dimension without a name");
    }
    if (!names.insert(d.name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dimension '" + d.name + "' declared twice");
    }
    if (d.states.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dimension '" + d.name + "' has no states");
    }
    std::set<std::string> states;
    for (const auto& s : d.states) {
      if (s.empty() || !states.insert(s).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "dimension '" + d.name + "' has an empty or repeated state");
      }
    }
  }
}

void KnowledgeBase::ValidateStateRef(const std::string& entity,
                                     const std::string& dimension,
                                     const std::optional<std::string>& state,
                                     ErrorCode code) const {
  RequireEntity(entity, ErrorCode::kUnresolvedParticipant);
  if (state && !StateDeclared(entity, dimension, *state)) {
    throw Error(code, "state '" + *state + "' is not declared on " + entity +
                          "." + dimension);
  }
}

namespace {

void RequireUniquePropertyNames(const std::vector<PropertyValue>& props) {
  std::set<std::string> names;
  for (const auto& p : props) {
    if (p.name.empty() || !names.insert(p.name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "property names must be non-empty and unique");
    }
  }
}

}  // namespace

const EntityClass& KnowledgeBase::AddClass(EntityClass cls,
                                           std::vector<Warning>* warnings) {
  if (cls.name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "class needs a name");
  }
  if (!cls.id.empty()) RequireFreshId(cls.id);
  for (const auto& group : {cls.parent_class_ids, cls.part_of_ids}) {
    std::set<std::string> seen;
    for (const auto& p : group) {
      if (p == cls.id) {
        throw Error(ErrorCode::kCycleError, "class '" + p + "' names itself");
      }
      if (!classes_.contains(p)) {
        throw Error(ErrorCode::kUnknownClass, "unknown class '" + p + "'");
      }
      if (!seen.insert(p).second) {
        throw Error(ErrorCode::kInvalidArgument, "class '" + p + "' listed twice");
      }
    }
  }
  if (cls.collection_of && !classes_.contains(*cls.collection_of)) {
    throw Error(ErrorCode::kUnknownClass,
                "unknown class '" + *cls.collection_of + "'");
  }
  ValidateDimensions(cls.dimensions);
  RequireUniquePropertyNames(cls.properties);

  if (warnings != nullptr) {
    for (const auto& [id, other] : classes_) {
      if (other.name == cls.name) {
        warnings->push_back({"DuplicateName",
                             "class name '" + cls.name + "' is also used by " + id,
                             0, 0});
        break;
      }
    }
  }
  if (cls.id.empty()) cls.id = NewId("class");
  std::string id = cls.id;
  return classes_.emplace(id, std::move(cls)).first->second;
}

void KnowledgeBase::AddRelation(Relation relation, const std::string& child_id,
                                const std::string& parent_id) {
  for (const auto* id : {&child_id, &parent_id}) {
    if (!classes_.contains(*id)) {
      throw Error(ErrorCode::kUnknownClass, "unknown class '" + *id + "'");
    }
  }
  if (child_id == parent_id || Reaches(relation, parent_id, child_id)) {
    throw Error(ErrorCode::kCycleError,
                std::string(Name(relation)) + " edge " + child_id + " -> " +
                    parent_id + " would close a cycle");
  }
  EntityClass& child = classes_.at(child_id);
  auto& edges =
      relation == Relation::kTypeOf ? child.parent_class_ids : child.part_of_ids;
  if (std::find(edges.begin(), edges.end(), parent_id) == edges.end()) {
    edges.push_back(parent_id);
  }
}

const EntityInstance& KnowledgeBase::Instantiate(EntityInstance instance) {
  if (!classes_.contains(instance.class_id)) {
    throw Error(ErrorCode::kUnknownClass,
                "unknown class '" + instance.class_id + "'");
  }
  if (!instance.id.empty()) RequireFreshId(instance.id);
  const auto dims = EffectiveDimensions(instance.class_id);
  auto find_dim = [&](const std::string& name) -> const Dimension& {
    for (const auto& d : dims) {
      if (d.name == name) return d;
    }
    throw Error(ErrorCode::kUnknownDimension,
                "class " + instance.class_id + " has no dimension '" + name + "'");
  };
  for (const auto& [dim, state] : instance.state_assignments) {
    const Dimension& d = find_dim(dim);
    if (std::find(d.states.begin(), d.states.end(), state) == d.states.end()) {
      throw Error(ErrorCode::kUnknownState,
                  "dimension '" + dim + "' has no state '" + state + "'");
    }
  }
  for (const auto& [dim, level] : instance.confidence) find_dim(dim);
  RequireUniquePropertyNames(instance.property_overrides);
  for (const auto& [dim, state] : instance.state_assignments) {
    instance.confidence.emplace(dim, Confidence::kAsserted);
  }
  if (instance.id.empty()) instance.id = NewId("inst");
  std::string id = instance.id;
  return instances_.emplace(id, std::move(instance)).first->second;
}

const SystemEntity& KnowledgeBase::AddSystem(SystemEntity system) {
  if (!system.id.empty()) RequireFreshId(system.id);
  for (const auto& c : system.component_entity_ids) {
    RequireEntity(c, ErrorCode::kUnresolvedParticipant);
  }
  if (system.component_entity_ids.empty() && !system.underspecified) {
    throw Error(ErrorCode::kInvalidArgument,
                "a fully specified system needs components");
  }
  if (system.id.empty()) system.id = NewId("sys");
  std::string id = system.id;
  return systems_.emplace(id, std::move(system)).first->second;
}

const Flow& KnowledgeBase::DefineFlow(Flow flow) {
  if (!flow.id.empty()) RequireFreshId(flow.id);
  const bool model = flow.kind == FlowKind::kConceptualModel;
  if (model && flow.is_measurement) {
    throw Error(ErrorCode::kInvalidArgument,
                "only method flows can be measurements");
  }
  if (flow.dataset_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset_id is set by attach_dataset");
  }
  for (const auto& p : flow.participants) {
    RequireEntity(p.entity, ErrorCode::kUnresolvedParticipant);
    if (model && instances_.contains(p.entity)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "conceptual model participant '" + p.entity +
                      "' is an instance; models are class-level");
    }
  }
  for (const auto& t : flow.triggers) {
    switch (t.kind) {
      case TriggerKind::kStatePredicate:
        ValidateStateRef(t.subject, t.dimension, t.state,
                         ErrorCode::kInvalidState);
        break;
      case TriggerKind::kProximity:
        RequireEntity(t.subject, ErrorCode::kUnresolvedParticipant);
        if (!t.near.empty()) RequireEntity(t.near, ErrorCode::kUnresolvedParticipant);
        break;
      case TriggerKind::kResearcher:
        if (!t.subject.empty()) {
          RequireEntity(t.subject, ErrorCode::kUnresolvedParticipant);
        }
        break;
    }
  }
  for (const auto& effect : flow.effects) {
    if (const auto* sc = std::get_if<StateChange>(&effect)) {
      ValidateStateRef(sc->entity, sc->dimension, sc->to_state,
                       ErrorCode::kInvalidState);
      if (sc->from_state) {
        ValidateStateRef(sc->entity, sc->dimension, sc->from_state,
                         ErrorCode::kInvalidState);
      }
    } else {
      RequireEntity(std::get<EntityCreation>(effect).entity,
                    ErrorCode::kUnresolvedParticipant);
    }
  }
  if (flow.refines && !flows_.contains(*flow.refines)) {
    throw Error(ErrorCode::kUnknownFlow, "unknown flow '" + *flow.refines + "'");
  }
  if (flow.id.empty()) flow.id = NewId("flow");
  std::string id = flow.id;
  return flows_.emplace(id, std::move(flow)).first->second;
}

const FlowInstance& KnowledgeBase::InstantiateFlow(const std::string& flow_id,
                                                   std::string instance_id,
                                                   std::string executed_at) {
  const Flow* flow = FindFlow(flow_id);
  if (flow == nullptr) {
    throw Error(ErrorCode::kUnknownFlow, "unknown flow '" + flow_id + "'");
  }
  if (flow->kind == FlowKind::kConceptualModel) {
    throw Error(ErrorCode::kConceptualModelNotInstantiable,
                "'" + flow_id + "' is a conceptual model");
  }
  if (flow->is_measurement && !flow->dataset_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "measurement flow '" + flow_id + "' has no dataset");
  }
  if (!instance_id.empty()) RequireFreshId(instance_id);
  FlowInstance fi;
  fi.id = instance_id.empty() ? NewId("run") : std::move(instance_id);
  fi.flow_id = flow_id;
  fi.sequence = ++executions_;
  fi.executed_at = std::move(executed_at);
  std::string id = fi.id;
  return flow_instances_.emplace(id, std::move(fi)).first->second;
}

namespace {

// Marks an inclusion-minimal set of feedback edges. Back edges of a DFS
// (nodes in flow order, edges in input order) break every cycle; each is
// then re-admitted if the graph stays acyclic with it. A knot that survives
// closes a cycle with the final non-knot edges, so no proper subset of the
// knots suffices.
void ClassifyKnots(const std::vector<std::string>& nodes,
                   std::vector<MeshEdge>& edges) {
  std::unordered_map<std::string, std::vector<size_t>> out;
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i].knot = false;
    out[edges[i].from].push_back(i);
  }
  std::unordered_map<std::string, int> color;
  std::function<void(const std::string&)> dfs = [&](const std::string& n) {
    color[n] = 1;
    for (size_t i : out[n]) {
      const std::string& next = edges[i].to;
      int c = color[next];
      if (c == 1) {
        edges[i].knot = true;
      } else if (c == 0) {
        dfs(next);
      }
    }
    color[n] = 2;
  };
  for (const auto& n : nodes) {
    if (color[n] == 0) dfs(n);
  }

  auto reaches = [&](const std::string& from, const std::string& to) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (cur == to) return true;
      if (!seen.insert(cur).second) continue;
      for (size_t i : out[cur]) {
        if (!edges[i].knot) stack.push_back(edges[i].to);
      }
    }
    return false;
  };
  for (auto& e : edges) {
    if (e.knot && !reaches(e.to, e.from)) e.knot = false;
  }
}

}  // namespace

const Mesh& KnowledgeBase::BuildMesh(std::string id,
                                     std::vector<std::string> flow_ids,
                                     std::vector<MeshEdge> edges) {
  if (!id.empty()) RequireFreshId(id);
  std::set<std::string> members;
  for (const auto& f : flow_ids) {
    if (!flows_.contains(f)) {
      throw Error(ErrorCode::kUnknownFlow, "unknown flow '" + f + "'");
    }
    if (!members.insert(f).second) {
      throw Error(ErrorCode::kInvalidArgument, "flow '" + f + "' listed twice");
    }
  }
  for (const auto& e : edges) {
    for (const auto* end : {&e.from, &e.to}) {
      if (!members.contains(*end)) {
        throw Error(ErrorCode::kUnknownFlow,
                    "edge endpoint '" + *end + "' is not a mesh flow");
      }
    }
  }
  ClassifyKnots(flow_ids, edges);
  Mesh mesh;
  mesh.id = id.empty() ? NewId("mesh") : std::move(id);
  mesh.flow_ids = std::move(flow_ids);
  mesh.edges = std::move(edges);
  std::string key = mesh.id;
  return meshes_.emplace(key, std::move(mesh)).first->second;
}

const ResearchQuestion& KnowledgeBase::DefineRq(ResearchQuestion rq) {
  if (!rq.id.empty()) RequireFreshId(rq.id);
  if (rq.model_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "a research question wraps at least one model");
  }
  std::set<std::string> distinct;
  for (const auto& m : rq.model_ids) {
    const Flow* f = FindFlow(m);
    if (f == nullptr) {
      throw Error(ErrorCode::kUnknownModel, "unknown model '" + m + "'");
    }
    if (f->kind == FlowKind::kMethodFlow) {
      throw Error(ErrorCode::kMethodFlowNotQuestionable,
                  "'" + m + "' is a method flow");
    }
    distinct.insert(m);
  }
  if (rq.kind == RqKind::kComparison && distinct.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "a comparison needs at least two models");
  }
  if (rq.kind == RqKind::kAspectValue) {
    if (!rq.target) {
      throw Error(ErrorCode::kInvalidArgument,
                  "an aspect-value question needs a target");
    }
    if (!IsEntity(rq.target->entity)) {
      throw Error(ErrorCode::kUnknownEntity,
                  "unknown entity '" + rq.target->entity + "'");
    }
    auto cls = ClassOf(rq.target->entity);
    bool declared = false;
    if (cls) {
      for (const auto& d : EffectiveDimensions(*cls)) {
        declared = declared || d.name == rq.target->dimension;
      }
    }
    if (!declared) {
      throw Error(ErrorCode::kUnknownDimension,
                  rq.target->entity + " has no dimension '" +
                      rq.target->dimension + "'");
    }
  }
  if (rq.parent_rq && !rqs_.contains(*rq.parent_rq)) {
    throw Error(ErrorCode::kUnknownRQ, "unknown question '" + *rq.parent_rq + "'");
  }
  if (rq.answer) {
    throw Error(ErrorCode::kInvalidArgument,
                "answers are recorded by research question blocks");
  }
  if (rq.id.empty()) rq.id = NewId("rq");
  std::string id = rq.id;
  return rqs_.emplace(id, std::move(rq)).first->second;
}

const Hypothesis& KnowledgeBase::DefineHypothesis(Hypothesis h) {
  if (!h.id.empty()) RequireFreshId(h.id);
  const Flow* f = FindFlow(h.model_id);
  if (f == nullptr) {
    throw Error(ErrorCode::kUnknownModel, "unknown model '" + h.model_id + "'");
  }
  if (f->kind == FlowKind::kMethodFlow) {
    throw Error(ErrorCode::kMethodFlowNotQuestionable,
                "'" + h.model_id + "' is a method flow");
  }
  ValidateStateRef(h.explains.entity, h.explains.dimension, h.explains.to_state,
                   ErrorCode::kInvalidState);
  if (h.explains.from_state) {
    ValidateStateRef(h.explains.entity, h.explains.dimension,
                     h.explains.from_state, ErrorCode::kInvalidState);
  }
  if (h.id.empty()) h.id = NewId("hyp");
  std::string id = h.id;
  return hypotheses_.emplace(id, std::move(h)).first->second;
}

const Instrument& KnowledgeBase::AddInstrument(Instrument instrument) {
  if (instrument.id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "instrument needs an id");
  }
  auto it = instruments_.find(instrument.id);
  if (it != instruments_.end()) {
    if (it->second == instrument) return it->second;
    throw Error(ErrorCode::kDuplicateId,
                "instrument '" + instrument.id + "' is registered differently");
  }
  RequireFreshId(instrument.id);
  std::string id = instrument.id;
  return instruments_.emplace(id, std::move(instrument)).first->second;
}

const DataSet& KnowledgeBase::AttachDataset(const std::string& flow_id,
                                            std::vector<Instrument> instruments,
                                            std::vector<DataPoint> datapoints,
                                            std::string reliability_note,
                                            std::string validity_note,
                                            std::string dataset_id) {
  const Flow* flow = FindFlow(flow_id);
  if (flow == nullptr) {
    throw Error(ErrorCode::kUnknownFlow, "unknown flow '" + flow_id + "'");
  }
  if (flow->kind != FlowKind::kMethodFlow || !flow->is_measurement) {
    throw Error(ErrorCode::kNotMeasurementFlow,
                "'" + flow_id + "' is not a measurement method flow");
  }
  if (flow->dataset_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + flow_id + "' already has dataset " + *flow->dataset_id);
  }
  if (!dataset_id.empty()) RequireFreshId(dataset_id);

  // Validate everything before the first write.
  std::vector<std::string> instrument_ids;
  std::set<std::string> known;
  for (const auto& ins : instruments) {
    if (ins.id.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "instrument needs an id");
    }
    auto it = instruments_.find(ins.id);
    if (it != instruments_.end() ? it->second != ins : KindOf(ins.id).has_value()) {
      throw Error(ErrorCode::kDuplicateId,
                  "instrument '" + ins.id + "' conflicts with a stored element");
    }
    if (known.insert(ins.id).second) instrument_ids.push_back(ins.id);
  }
  std::set<std::string> point_ids;
  for (size_t i = 0; i < datapoints.size(); ++i) {
    auto& dp = datapoints[i];
    if (!known.contains(dp.recorded_by)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "datapoint recorded by '" + dp.recorded_by +
                      "', which is not an instrument of this dataset");
    }
    if (!dp.id.empty() && !point_ids.insert(dp.id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "datapoint id '" + dp.id + "' repeated");
    }
  }

  for (auto& ins : instruments) AddInstrument(std::move(ins));
  DataSet ds;
  ds.id = dataset_id.empty() ? NewId("ds") : std::move(dataset_id);
  for (size_t i = 0; i < datapoints.size(); ++i) {
    if (datapoints[i].id.empty()) {
      // Generated ids step around ids given explicitly.
      std::string id = ds.id + "/p" + std::to_string(i);
      while (point_ids.contains(id)) id += "_";
      point_ids.insert(id);
      datapoints[i].id = std::move(id);
    }
  }
  ds.instrument_ids = std::move(instrument_ids);
  ds.datapoints = std::move(datapoints);
  ds.reliability_note = std::move(reliability_note);
  ds.validity_note = std::move(validity_note);
  ds.source_flow_id = flow_id;
  flows_.at(flow_id).dataset_id = ds.id;
  std::string id = ds.id;
  return datasets_.emplace(id, std::move(ds)).first->second;
}

const Comment& KnowledgeBase::AddComment(Comment comment) {
  if (!comment.id.empty()) RequireFreshId(comment.id);
  if (const auto* span = std::get_if<Span>(&comment.target)) {
    if (!span_resolver_ || !span_resolver_(*span)) {
      throw Error(ErrorCode::kUnknownTarget,
                  "comment span in '" + span->block_id + "' does not resolve");
    }
  } else {
    const auto& target = std::get<std::string>(comment.target);
    if (!KindOf(target)) {
      throw Error(ErrorCode::kUnknownTarget, "unknown element '" + target + "'");
    }
  }
  if (comment.id.empty()) comment.id = NewId("note");
  std::string id = comment.id;
  return comments_.emplace(id, std::move(comment)).first->second;
}

void KnowledgeBase::SetRqAnswer(const std::string& rq_id, RqAnswer answer) {
  auto it = rqs_.find(rq_id);
  if (it == rqs_.end()) {
    throw Error(ErrorCode::kUnknownRQ, "unknown question '" + rq_id + "'");
  }
  it->second.answer = std::move(answer);
}

bool KnowledgeBase::operator==(const KnowledgeBase& o) const {
  return classes_ == o.classes_ && instances_ == o.instances_ &&
         systems_ == o.systems_ && flows_ == o.flows_ &&
         flow_instances_ == o.flow_instances_ && meshes_ == o.meshes_ &&
         rqs_ == o.rqs_ && hypotheses_ == o.hypotheses_ &&
         datasets_ == o.datasets_ && instruments_ == o.instruments_ &&
         comments_ == o.comments_ && next_sequence_ == o.next_sequence_ &&
         executions_ == o.executions_;
}

}  // namespace scibrowse
