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

#include <array>
#include <utility>

#include "scibrowse/article_json.h"
#include "scibrowse/concept_kb.h"

namespace scibrowse {

namespace {

[[noreturn]] void Corrupt(std::string_view where, std::string_view what) {
  throw Error(ErrorCode::kCorruptStore,
              std::string(where) + ": " + std::string(what));
}

std::string At(std::string_view where, std::string_view key) {
  return std::string(where) + "/" + std::string(key);
}

std::string At(std::string_view where, size_t i) {
  return std::string(where) + "/" + std::to_string(i);
}

const Json* Find(const Json& obj, std::string_view key, std::string_view where) {
  if (!obj.is_object()) Corrupt(where, "expected object");
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::optional<std::string> MaybeString(const Json& obj, std::string_view key,
                                       std::string_view where) {
  const Json* v = Find(obj, key, where);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) Corrupt(At(where, key), "expected string");
  return v->get<std::string>();
}

bool GetBool(const Json& obj, std::string_view key, std::string_view where) {
  const Json* v = Find(obj, key, where);
  if (v == nullptr) return false;
  if (!v->is_boolean()) Corrupt(At(where, key), "expected boolean");
  return v->get<bool>();
}

int64_t GetInt(const Json& obj, std::string_view key, std::string_view where) {
  const Json* v = Find(obj, key, where);
  if (v == nullptr) return 0;
  if (!v->is_number_integer()) Corrupt(At(where, key), "expected integer");
  return v->get<int64_t>();
}

const Json& GetArray(const Json& obj, std::string_view key,
                     std::string_view where) {
  static const Json kEmpty = Json::array();
  const Json* v = Find(obj, key, where);
  if (v == nullptr) return kEmpty;
  if (!v->is_array()) Corrupt(At(where, key), "expected array");
  return *v;
}

std::vector<std::string> GetStrings(const Json& obj, std::string_view key,
                                    std::string_view where) {
  std::vector<std::string> out;
  const Json& arr = GetArray(obj, key, where);
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) Corrupt(At(At(where, key), i), "expected string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

Json Strings(const std::vector<std::string>& v) {
  Json j = Json::array();
  for (const auto& s : v) j.push_back(s);
  return j;
}

Json OptString(const std::optional<std::string>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// Maps an enum name back to its value by probing every value.
template <typename E, size_t N>
E ParseEnum(const Json& obj, std::string_view key, std::string_view where,
            const std::array<E, N>& values, E fallback) {
  auto name = MaybeString(obj, key, where);
  if (!name) return fallback;
  for (E v : values) {
    if (Name(v) == *name) return v;
  }
  Corrupt(At(where, key), "unknown value '" + *name + "'");
}

constexpr std::array kRoles = {
    ParticipantRole::kCause,    ParticipantRole::kAffected,
    ParticipantRole::kConsumed, ParticipantRole::kProduced,
    ParticipantRole::kResearcherAction, ParticipantRole::kMeasured};
constexpr std::array kTriggerKinds = {TriggerKind::kStatePredicate,
                                      TriggerKind::kProximity,
                                      TriggerKind::kResearcher};
constexpr std::array kConfidences = {Confidence::kAsserted, Confidence::kInferred,
                                     Confidence::kUnknown};
constexpr std::array kFlowKinds = {FlowKind::kMethodFlow,
                                   FlowKind::kConceptualModel};
constexpr std::array kModeledAs = {ModeledAs::kEntity, ModeledAs::kProcessAlias};
constexpr std::array kRqKinds = {RqKind::kAspectValue, RqKind::kComparison};
constexpr std::array kStatuses = {HypothesisStatus::kProposed,
                                  HypothesisStatus::kConfirmed,
                                  HypothesisStatus::kRejected};
constexpr std::array kDiscourse = {
    DiscourseType::kDesignRationale, DiscourseType::kJustification,
    DiscourseType::kBackground, DiscourseType::kOther};

Json PropertiesToJson(const std::vector<PropertyValue>& props) {
  Json arr = Json::array();
  for (const auto& p : props) {
    Json j = Json::object();
    j["name"] = p.name;
    if (const auto* s = std::get_if<std::string>(&p.value)) {
      j["value"] = *s;
    } else {
      j["value"] = std::get<double>(p.value);
    }
    j["unit"] = p.unit;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<PropertyValue> PropertiesFromJson(const Json& obj,
                                              std::string_view key,
                                              std::string_view where) {
  std::vector<PropertyValue> out;
  const Json& arr = GetArray(obj, key, where);
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string w = At(At(where, key), i);
    PropertyValue p;
    p.name = RequireString(arr[i], "name", w);
    const Json& v = RequireField(arr[i], "value", w);
    if (v.is_string()) {
      p.value = v.get<std::string>();
    } else if (v.is_number()) {
      p.value = v.get<double>();
    } else {
      Corrupt(At(w, "value"), "expected string or number");
    }
    p.unit = MaybeString(arr[i], "unit", w).value_or("");
    out.push_back(std::move(p));
  }
  return out;
}

Json EffectToJson(const Effect& e) {
  if (const auto* sc = std::get_if<StateChange>(&e)) {
    Json j = Json::object();
    j["type"] = "state_change";
    j["entity"] = sc->entity;
    j["dimension"] = sc->dimension;
    j["from_state"] = OptString(sc->from_state);
    j["to_state"] = sc->to_state;
    return j;
  }
  Json j = Json::object();
  j["type"] = "entity_creation";
  j["entity"] = std::get<EntityCreation>(e).entity;
  return j;
}

Effect EffectFromJson(const Json& j, std::string_view where) {
  const std::string type = RequireString(j, "type", where);
  if (type == "state_change") return StateChangeFromJson(j, where);
  if (type == "entity_creation") {
    return EntityCreation{RequireString(j, "entity", where)};
  }
  Corrupt(At(where, "type"), "unknown effect type '" + type + "'");
}

template <typename T, typename Decode>
std::vector<T> ListFromJson(const Json& obj, std::string_view key,
                            std::string_view where, Decode decode) {
  std::vector<T> out;
  const Json& arr = GetArray(obj, key, where);
  for (size_t i = 0; i < arr.size(); ++i) {
    out.push_back(decode(arr[i], At(At(where, key), i)));
  }
  return out;
}

}  // namespace

// ---- encoders

Json ToJson(const StateChange& v) { return EffectToJson(v); }

Json ToJson(const EntityClass& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["name"] = v.name;
  j["parent_class_ids"] = Strings(v.parent_class_ids);
  j["part_of_ids"] = Strings(v.part_of_ids);
  j["collection_of"] = OptString(v.collection_of);
  j["properties"] = PropertiesToJson(v.properties);
  Json dims = Json::array();
  for (const auto& d : v.dimensions) {
    Json dj = Json::object();
    dj["name"] = d.name;
    dj["states"] = Strings(d.states);
    dj["context_note"] = d.context_note;
    dims.push_back(std::move(dj));
  }
  j["dimensions"] = std::move(dims);
  j["modeled_as"] = std::string(Name(v.modeled_as));
  j["situational"] = v.situational;
  j["external_code"] = OptString(v.external_code);
  return j;
}

Json ToJson(const EntityInstance& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["class_id"] = v.class_id;
  j["property_overrides"] = PropertiesToJson(v.property_overrides);
  Json states = Json::object();
  for (const auto& [d, s] : v.state_assignments) states[d] = s;
  j["state_assignments"] = std::move(states);
  Json conf = Json::object();
  for (const auto& [d, c] : v.confidence) conf[d] = std::string(Name(c));
  j["confidence"] = std::move(conf);
  return j;
}

Json ToJson(const SystemEntity& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["name"] = v.name;
  j["component_entity_ids"] = Strings(v.component_entity_ids);
  j["underspecified"] = v.underspecified;
  j["notes"] = v.notes;
  return j;
}

Json ToJson(const Flow& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["name"] = v.name;
  j["kind"] = std::string(Name(v.kind));
  j["abstraction_level"] = v.abstraction_level;
  Json parts = Json::array();
  for (const auto& p : v.participants) {
    Json pj = Json::object();
    pj["entity"] = p.entity;
    pj["role"] = std::string(Name(p.role));
    parts.push_back(std::move(pj));
  }
  j["participants"] = std::move(parts);
  Json triggers = Json::array();
  for (const auto& t : v.triggers) {
    Json tj = Json::object();
    tj["kind"] = std::string(Name(t.kind));
    tj["subject"] = t.subject;
    tj["dimension"] = t.dimension;
    tj["state"] = t.state;
    tj["near"] = t.near;
    triggers.push_back(std::move(tj));
  }
  j["triggers"] = std::move(triggers);
  Json effects = Json::array();
  for (const auto& e : v.effects) effects.push_back(EffectToJson(e));
  j["effects"] = std::move(effects);
  j["is_measurement"] = v.is_measurement;
  j["dataset_id"] = OptString(v.dataset_id);
  j["refines"] = OptString(v.refines);
  j["description"] = v.description;
  return j;
}

Json ToJson(const FlowInstance& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["flow_id"] = v.flow_id;
  j["sequence"] = v.sequence;
  j["executed_at"] = v.executed_at;
  return j;
}

Json ToJson(const Mesh& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["flow_ids"] = Strings(v.flow_ids);
  Json edges = Json::array();
  for (const auto& e : v.edges) {
    Json ej = Json::object();
    ej["from"] = e.from;
    ej["to"] = e.to;
    ej["via"] = e.via;
    ej["knot"] = e.knot;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  j["component_count"] = v.ComponentCount();
  return j;
}

Json ToJson(const ResearchQuestion& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["kind"] = std::string(Name(v.kind));
  j["text"] = v.text;
  j["model_ids"] = Strings(v.model_ids);
  j["parent_rq"] = OptString(v.parent_rq);
  if (v.target) {
    Json t = Json::object();
    t["entity"] = v.target->entity;
    t["dimension"] = v.target->dimension;
    j["target"] = std::move(t);
  } else {
    j["target"] = nullptr;
  }
  if (v.answer) {
    Json a = Json::object();
    a["text"] = v.answer->text;
    a["rqb_id"] = v.answer->rqb_id;
    j["answer"] = std::move(a);
  } else {
    j["answer"] = nullptr;
  }
  return j;
}

Json ToJson(const Hypothesis& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["model_id"] = v.model_id;
  j["explains"] = EffectToJson(v.explains);
  j["status"] = std::string(Name(v.status));
  j["preferred"] = v.preferred;
  return j;
}

Json ToJson(const Instrument& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["name"] = v.name;
  j["description"] = v.description;
  return j;
}

Json ToJson(const DataSet& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["instrument_ids"] = Strings(v.instrument_ids);
  Json points = Json::array();
  for (const auto& p : v.datapoints) {
    Json pj = Json::object();
    pj["id"] = p.id;
    Json values = Json::object();
    for (const auto& [k, val] : p.values) values[k] = val;
    pj["values"] = std::move(values);
    pj["recorded_by"] = p.recorded_by;
    points.push_back(std::move(pj));
  }
  j["datapoints"] = std::move(points);
  j["reliability_note"] = v.reliability_note;
  j["validity_note"] = v.validity_note;
  j["source_flow_id"] = v.source_flow_id;
  return j;
}

Json ToJson(const Comment& v) {
  Json j = Json::object();
  j["id"] = v.id;
  if (const auto* span = std::get_if<Span>(&v.target)) {
    j["target_span"] = SpanToJson(*span);
    j["target_element"] = nullptr;
  } else {
    j["target_span"] = nullptr;
    j["target_element"] = std::get<std::string>(v.target);
  }
  j["discourse_type"] = std::string(Name(v.discourse_type));
  j["text"] = v.text;
  return j;
}

// ---- decoders

StateChange StateChangeFromJson(const Json& j, std::string_view where) {
  StateChange sc;
  sc.entity = RequireString(j, "entity", where);
  sc.dimension = RequireString(j, "dimension", where);
  sc.from_state = MaybeString(j, "from_state", where);
  sc.to_state = RequireString(j, "to_state", where);
  return sc;
}

EntityClass ClassFromJson(const Json& j, std::string_view where) {
  EntityClass c;
  c.id = MaybeString(j, "id", where).value_or("");
  c.name = RequireString(j, "name", where);
  c.parent_class_ids = GetStrings(j, "parent_class_ids", where);
  c.part_of_ids = GetStrings(j, "part_of_ids", where);
  c.collection_of = MaybeString(j, "collection_of", where);
  c.properties = PropertiesFromJson(j, "properties", where);
  c.dimensions = ListFromJson<Dimension>(
      j, "dimensions", where, [](const Json& dj, const std::string& w) {
        Dimension d;
        d.name = RequireString(dj, "name", w);
        d.states = GetStrings(dj, "states", w);
        d.context_note = MaybeString(dj, "context_note", w).value_or("");
        return d;
      });
  c.modeled_as = ParseEnum(j, "modeled_as", where, kModeledAs, ModeledAs::kEntity);
  c.situational = GetBool(j, "situational", where);
  c.external_code = MaybeString(j, "external_code", where);
  return c;
}

EntityInstance InstanceFromJson(const Json& j, std::string_view where) {
  EntityInstance inst;
  inst.id = MaybeString(j, "id", where).value_or("");
  inst.class_id = RequireString(j, "class_id", where);
  inst.property_overrides = PropertiesFromJson(j, "property_overrides", where);
  if (const Json* states = Find(j, "state_assignments", where)) {
    const std::string w = At(where, "state_assignments");
    if (!states->is_object()) Corrupt(w, "expected object");
    for (const auto& [k, v] : states->items()) {
      if (!v.is_string()) Corrupt(At(w, k), "expected string");
      inst.state_assignments[k] = v.get<std::string>();
    }
  }
  if (const Json* conf = Find(j, "confidence", where)) {
    const std::string w = At(where, "confidence");
    if (!conf->is_object()) Corrupt(w, "expected object");
    for (const auto& [k, v] : conf->items()) {
      Json probe = Json::object();
      probe["c"] = v;
      inst.confidence[k] =
          ParseEnum(probe, "c", At(w, k), kConfidences, Confidence::kAsserted);
    }
  }
  return inst;
}

SystemEntity SystemFromJson(const Json& j, std::string_view where) {
  SystemEntity s;
  s.id = MaybeString(j, "id", where).value_or("");
  s.name = MaybeString(j, "name", where).value_or("");
  s.component_entity_ids = GetStrings(j, "component_entity_ids", where);
  s.underspecified = GetBool(j, "underspecified", where);
  s.notes = MaybeString(j, "notes", where).value_or("");
  return s;
}

Flow FlowFromJson(const Json& j, std::string_view where) {
  Flow f;
  f.id = MaybeString(j, "id", where).value_or("");
  f.name = MaybeString(j, "name", where).value_or("");
  f.kind = ParseEnum(j, "kind", where, kFlowKinds, FlowKind::kMethodFlow);
  f.abstraction_level = static_cast<int>(GetInt(j, "abstraction_level", where));
  f.participants = ListFromJson<Participant>(
      j, "participants", where, [](const Json& pj, const std::string& w) {
        Participant p;
        p.entity = RequireString(pj, "entity", w);
        p.role = ParseEnum(pj, "role", w, kRoles, ParticipantRole::kAffected);
        return p;
      });
  f.triggers = ListFromJson<TriggerCondition>(
      j, "triggers", where, [](const Json& tj, const std::string& w) {
        TriggerCondition t;
        t.kind = ParseEnum(tj, "kind", w, kTriggerKinds, TriggerKind::kResearcher);
        t.subject = MaybeString(tj, "subject", w).value_or("");
        t.dimension = MaybeString(tj, "dimension", w).value_or("");
        t.state = MaybeString(tj, "state", w).value_or("");
        t.near = MaybeString(tj, "near", w).value_or("");
        return t;
      });
  f.effects = ListFromJson<Effect>(j, "effects", where, EffectFromJson);
  f.is_measurement = GetBool(j, "is_measurement", where);
  f.dataset_id = MaybeString(j, "dataset_id", where);
  f.refines = MaybeString(j, "refines", where);
  f.description = MaybeString(j, "description", where).value_or("");
  return f;
}

FlowInstance FlowInstanceFromJson(const Json& j, std::string_view where) {
  FlowInstance fi;
  fi.id = RequireString(j, "id", where);
  fi.flow_id = RequireString(j, "flow_id", where);
  fi.sequence = static_cast<uint64_t>(RequireInt(j, "sequence", where));
  fi.executed_at = MaybeString(j, "executed_at", where).value_or("");
  return fi;
}

std::vector<MeshEdge> MeshEdgesFromJson(const Json& arr, std::string_view where) {
  if (!arr.is_array()) Corrupt(where, "expected array");
  std::vector<MeshEdge> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string w = At(where, i);
    MeshEdge e;
    e.from = RequireString(arr[i], "from", w);
    e.to = RequireString(arr[i], "to", w);
    e.via = MaybeString(arr[i], "via", w).value_or("");
    e.knot = GetBool(arr[i], "knot", w);
    out.push_back(std::move(e));
  }
  return out;
}

Mesh MeshFromJson(const Json& j, std::string_view where) {
  Mesh m;
  m.id = MaybeString(j, "id", where).value_or("");
  m.flow_ids = GetStrings(j, "flow_ids", where);
  m.edges = MeshEdgesFromJson(GetArray(j, "edges", where), At(where, "edges"));
  return m;
}

ResearchQuestion RqFromJson(const Json& j, std::string_view where) {
  ResearchQuestion rq;
  rq.id = MaybeString(j, "id", where).value_or("");
  rq.kind = ParseEnum(j, "kind", where, kRqKinds, RqKind::kAspectValue);
  rq.text = MaybeString(j, "text", where).value_or("");
  rq.model_ids = GetStrings(j, "model_ids", where);
  rq.parent_rq = MaybeString(j, "parent_rq", where);
  if (const Json* t = Find(j, "target", where)) {
    const std::string w = At(where, "target");
    rq.target = RqTarget{RequireString(*t, "entity", w),
                         RequireString(*t, "dimension", w)};
  }
  if (const Json* a = Find(j, "answer", where)) {
    const std::string w = At(where, "answer");
    rq.answer = RqAnswer{RequireString(*a, "text", w),
                         RequireString(*a, "rqb_id", w)};
  }
  return rq;
}

Hypothesis HypothesisFromJson(const Json& j, std::string_view where) {
  Hypothesis h;
  h.id = MaybeString(j, "id", where).value_or("");
  h.model_id = RequireString(j, "model_id", where);
  h.explains = StateChangeFromJson(RequireField(j, "explains", where),
                                   At(where, "explains"));
  h.status = ParseEnum(j, "status", where, kStatuses, HypothesisStatus::kProposed);
  h.preferred = GetBool(j, "preferred", where);
  return h;
}

Instrument InstrumentFromJson(const Json& j, std::string_view where) {
  Instrument ins;
  ins.id = RequireString(j, "id", where);
  ins.name = MaybeString(j, "name", where).value_or("");
  ins.description = MaybeString(j, "description", where).value_or("");
  return ins;
}

DataPoint DataPointFromJson(const Json& j, std::string_view where) {
  DataPoint p;
  p.id = MaybeString(j, "id", where).value_or("");
  if (const Json* values = Find(j, "values", where)) {
    const std::string w = At(where, "values");
    if (!values->is_object()) Corrupt(w, "expected object");
    for (const auto& [k, v] : values->items()) {
      // Numbers are kept in their JSON spelling.
      p.values[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  p.recorded_by = RequireString(j, "recorded_by", where);
  return p;
}

DataSet DataSetFromJson(const Json& j, std::string_view where) {
  DataSet ds;
  ds.id = RequireString(j, "id", where);
  ds.instrument_ids = GetStrings(j, "instrument_ids", where);
  ds.datapoints = ListFromJson<DataPoint>(j, "datapoints", where,
                                          DataPointFromJson);
  ds.reliability_note = MaybeString(j, "reliability_note", where).value_or("");
  ds.validity_note = MaybeString(j, "validity_note", where).value_or("");
  ds.source_flow_id = RequireString(j, "source_flow_id", where);
  return ds;
}

Comment CommentFromJson(const Json& j, std::string_view where) {
  Comment c;
  c.id = MaybeString(j, "id", where).value_or("");
  if (const Json* span = Find(j, "target_span", where)) {
    c.target = SpanFromJson(*span, At(where, "target_span"));
  } else if (auto element = MaybeString(j, "target_element", where)) {
    c.target = *element;
  } else {
    Corrupt(where, "comment has no target");
  }
  c.discourse_type =
      ParseEnum(j, "discourse_type", where, kDiscourse, DiscourseType::kOther);
  c.text = MaybeString(j, "text", where).value_or("");
  return c;
}

// ---- whole store

Json KnowledgeBase::ToJson() const {
  auto list = [](const auto& m) {
    Json arr = Json::array();
    for (const auto& [id, v] : m) arr.push_back(scibrowse::ToJson(v));
    return arr;
  };
  Json j = Json::object();
  j["next_sequence"] = next_sequence_;
  j["executions"] = executions_;
  j["classes"] = list(classes_);
  j["instances"] = list(instances_);
  j["systems"] = list(systems_);
  j["flows"] = list(flows_);
  j["flow_instances"] = list(flow_instances_);
  j["meshes"] = list(meshes_);
  j["research_questions"] = list(rqs_);
  j["hypotheses"] = list(hypotheses_);
  j["instruments"] = list(instruments_);
  j["datasets"] = list(datasets_);
  j["comments"] = list(comments_);
  return j;
}

KnowledgeBase KnowledgeBase::FromJson(const Json& j) {
  const std::string where = "kb";
  if (!j.is_object()) Corrupt(where, "expected object");
  KnowledgeBase kb;
  kb.next_sequence_ = static_cast<uint64_t>(RequireInt(j, "next_sequence", where));
  kb.executions_ = static_cast<uint64_t>(RequireInt(j, "executions", where));
  std::set<std::string> ids;
  auto load = [&](std::string_view key, auto& target, auto decode) {
    const Json& arr = RequireArray(j, key, where);
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string w = At(At(where, key), i);
      auto v = decode(arr[i], w);
      if (v.id.empty()) Corrupt(w, "missing id");
      if (!ids.insert(v.id).second) Corrupt(w, "duplicate id '" + v.id + "'");
      std::string id = v.id;
      target.emplace(std::move(id), std::move(v));
    }
  };
  load("classes", kb.classes_, ClassFromJson);
  load("instances", kb.instances_, InstanceFromJson);
  load("systems", kb.systems_, SystemFromJson);
  load("flows", kb.flows_, FlowFromJson);
  load("flow_instances", kb.flow_instances_, FlowInstanceFromJson);
  load("meshes", kb.meshes_, MeshFromJson);
  load("research_questions", kb.rqs_, RqFromJson);
  load("hypotheses", kb.hypotheses_, HypothesisFromJson);
  load("instruments", kb.instruments_, InstrumentFromJson);
  load("datasets", kb.datasets_, DataSetFromJson);
  load("comments", kb.comments_, CommentFromJson);

  // Cheap structural checks; a store that fails them was edited by hand.
  for (const auto& [id, c] : kb.classes_) {
    for (const auto& p : c.parent_class_ids) {
      if (!kb.classes_.contains(p)) Corrupt(where, id + " names unknown parent " + p);
    }
    for (const auto& p : c.part_of_ids) {
      if (!kb.classes_.contains(p)) Corrupt(where, id + " names unknown whole " + p);
    }
  }
  if (!kb.RelationGraphsAcyclic()) Corrupt(where, "class relations contain a cycle");
  for (const auto& [id, fi] : kb.flow_instances_) {
    const Flow* f = kb.FindFlow(fi.flow_id);
    if (f == nullptr || f->kind != FlowKind::kMethodFlow) {
      Corrupt(where, "flow instance " + id + " does not realize a method flow");
    }
  }
  for (const auto& [id, rq] : kb.rqs_) {
    for (const auto& m : rq.model_ids) {
      const Flow* f = kb.FindFlow(m);
      if (f == nullptr || f->kind != FlowKind::kConceptualModel) {
        Corrupt(where, "question " + id + " wraps a non-model " + m);
      }
    }
  }
  return kb;
}

}  // namespace scibrowse
