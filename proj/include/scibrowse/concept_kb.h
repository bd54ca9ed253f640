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

// Qualitative entity-state-flow knowledgebase.
//
// Entities are classes (linked by type-of and part-of, both acyclic),
// instances of classes, and systems (composites that may be
// underspecified). Classes carry properties (fixed values) and dimensions
// (named sets of qualitative states). Dimensions are inherited down type-of
// edges; a subclass may add states to an inherited dimension, never remove.
//
// Flows are causal process statements: participants with roles, trigger
// conditions and effects (state changes or entity creation). Method flows
// are researcher-triggered procedures and may be executed (instantiated);
// conceptual models are explanations and are never instantiated. Research
// questions and hypotheses wrap conceptual models only. Meshes compose flows
// and flag feedback edges (knots) instead of rejecting them.
//
// Every element id is unique across all element kinds of one store.

#ifndef SCIBROWSE_CONCEPT_KB_H_
#define SCIBROWSE_CONCEPT_KB_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scibrowse/article.h"
#include "scibrowse/canonical_json.h"
#include "scibrowse/error.h"

namespace scibrowse {

struct PropertyValue {
  std::string name;
  std::variant<std::string, double> value;
  std::string unit;

  bool operator==(const PropertyValue&) const = default;
};

struct Dimension {
  std::string name;
  std::vector<std::string> states;
  std::string context_note;  // e.g. depends on temperature and pressure

  bool operator==(const Dimension&) const = default;
};

enum class ModeledAs { kEntity, kProcessAlias };

struct EntityClass {
  std::string id;
  std::string name;
  std::vector<std::string> parent_class_ids;  // type-of targets
  std::vector<std::string> part_of_ids;
  std::optional<std::string> collection_of;
  std::vector<PropertyValue> properties;
  std::vector<Dimension> dimensions;  // declared here, not inherited
  ModeledAs modeled_as = ModeledAs::kEntity;
  // A derived sub-entity created for one situation (e.g. the distal part of
  // an injured axon).
  bool situational = false;
  std::optional<std::string> external_code;  // vocabulary hook, unused

  bool operator==(const EntityClass&) const = default;
};

enum class Confidence { kAsserted, kInferred, kUnknown };

struct EntityInstance {
  std::string id;
  std::string class_id;
  std::vector<PropertyValue> property_overrides;
  std::map<std::string, std::string> state_assignments;  // dimension -> state
  std::map<std::string, Confidence> confidence;           // dimension -> level

  bool operator==(const EntityInstance&) const = default;
};

struct SystemEntity {
  std::string id;
  std::string name;
  std::vector<std::string> component_entity_ids;
  bool underspecified = false;
  std::string notes;

  bool operator==(const SystemEntity&) const = default;
};

enum class FlowKind { kMethodFlow, kConceptualModel };

enum class ParticipantRole {
  kCause,
  kAffected,
  kConsumed,
  kProduced,
  kResearcherAction,
  kMeasured,
};

struct Participant {
  std::string entity;
  ParticipantRole role = ParticipantRole::kAffected;

  bool operator==(const Participant&) const = default;
};

enum class TriggerKind { kStatePredicate, kProximity, kResearcher };

struct TriggerCondition {
  TriggerKind kind = TriggerKind::kResearcher;
  std::string subject;  // may be empty for researcher triggers
  std::string dimension;  // state predicates
  std::string state;      // state predicates
  std::string near;       // proximity: the other entity

  bool operator==(const TriggerCondition&) const = default;
};

struct StateChange {
  std::string entity;
  std::string dimension;
  std::optional<std::string> from_state;
  std::string to_state;

  bool operator==(const StateChange&) const = default;
};

struct EntityCreation {
  std::string entity;  // class of the created entity

  bool operator==(const EntityCreation&) const = default;
};

using Effect = std::variant<StateChange, EntityCreation>;

struct Flow {
  std::string id;
  std::string name;
  FlowKind kind = FlowKind::kMethodFlow;
  int abstraction_level = 0;
  std::vector<Participant> participants;
  std::vector<TriggerCondition> triggers;
  std::vector<Effect> effects;
  bool is_measurement = false;
  std::optional<std::string> dataset_id;
  // A more detailed statement this flow abbreviates.
  std::optional<std::string> refines;
  std::string description;

  bool operator==(const Flow&) const = default;
};

// One execution of a method flow. `sequence` is a logical clock (the
// store's execution count), which keeps stores replayable.
struct FlowInstance {
  std::string id;
  std::string flow_id;
  uint64_t sequence = 0;
  std::string executed_at;  // caller-supplied timestamp, may be empty

  bool operator==(const FlowInstance&) const = default;
};

struct MeshEdge {
  std::string from;  // producer flow
  std::string to;    // consumer flow
  std::string via;   // shared entity or state, informational
  bool knot = false;

  bool operator==(const MeshEdge&) const = default;
};

struct Mesh {
  std::string id;
  std::vector<std::string> flow_ids;
  std::vector<MeshEdge> edges;

  std::vector<MeshEdge> KnotEdges() const;
  // Weakly connected components over flow_ids.
  size_t ComponentCount() const;

  bool operator==(const Mesh&) const = default;
};

enum class RqKind { kAspectValue, kComparison };

struct RqTarget {
  std::string entity;
  std::string dimension;

  bool operator==(const RqTarget&) const = default;
};

struct RqAnswer {
  std::string text;
  std::string rqb_id;

  bool operator==(const RqAnswer&) const = default;
};

struct ResearchQuestion {
  std::string id;
  RqKind kind = RqKind::kAspectValue;
  std::string text;
  std::vector<std::string> model_ids;
  std::optional<std::string> parent_rq;
  std::optional<RqTarget> target;  // aspect_value questions
  std::optional<RqAnswer> answer;

  bool operator==(const ResearchQuestion&) const = default;
};

enum class HypothesisStatus { kProposed, kConfirmed, kRejected };

struct Hypothesis {
  std::string id;
  std::string model_id;
  StateChange explains;
  HypothesisStatus status = HypothesisStatus::kProposed;
  bool preferred = false;

  bool operator==(const Hypothesis&) const = default;
};

struct Instrument {
  std::string id;
  std::string name;
  std::string description;

  bool operator==(const Instrument&) const = default;
};

struct DataPoint {
  std::string id;
  std::map<std::string, std::string> values;
  std::string recorded_by;

  bool operator==(const DataPoint&) const = default;
};

struct DataSet {
  std::string id;
  std::vector<std::string> instrument_ids;
  std::vector<DataPoint> datapoints;
  std::string reliability_note;
  std::string validity_note;
  std::string source_flow_id;

  bool operator==(const DataSet&) const = default;
};

enum class DiscourseType { kDesignRationale, kJustification, kBackground, kOther };

struct Comment {
  std::string id;
  std::variant<Span, std::string> target;  // text span or element id
  DiscourseType discourse_type = DiscourseType::kOther;
  std::string text;

  bool operator==(const Comment&) const = default;
};

enum class Relation { kTypeOf, kPartOf };

enum class ElementKind {
  kClass,
  kInstance,
  kSystem,
  kFlow,
  kFlowInstance,
  kMesh,
  kResearchQuestion,
  kHypothesis,
  kDataSet,
  kInstrument,
  kComment,
};

struct Determinant {
  std::string flow_id;
  std::string cause;  // empty when the flow names no cause participant

  bool operator==(const Determinant&) const = default;
};

// Enum names used in JSON.
std::string_view Name(ModeledAs v);
std::string_view Name(Confidence v);
std::string_view Name(FlowKind v);
std::string_view Name(ParticipantRole v);
std::string_view Name(TriggerKind v);
std::string_view Name(RqKind v);
std::string_view Name(HypothesisStatus v);
std::string_view Name(DiscourseType v);
std::string_view Name(Relation v);
std::string_view Name(ElementKind v);

class KnowledgeBase {
 public:
  using SpanResolver = std::function<bool(const Span&)>;

  KnowledgeBase() = default;

  // Lets comments target text spans of the owning article.
  void set_span_resolver(SpanResolver resolver) {
    span_resolver_ = std::move(resolver);
  }

  // ---- mutations. Each either fully applies or throws and leaves the store
  // unchanged. An empty id is replaced by a generated one.

  // Throws kUnknownClass, kCycleError, kInvalidArgument (bad dimension or
  // duplicate property), kDuplicateId. A class name already in use adds a
  // DuplicateName warning.
  const EntityClass& AddClass(EntityClass cls,
                              std::vector<Warning>* warnings = nullptr);
  // Adds child -[relation]-> parent. Throws kUnknownClass, kCycleError.
  void AddRelation(Relation relation, const std::string& child_id,
                   const std::string& parent_id);

  // Throws kUnknownClass, kUnknownDimension, kUnknownState. Missing
  // confidence entries default to asserted.
  const EntityInstance& Instantiate(EntityInstance instance);

  // Throws kUnresolvedParticipant for unknown components, kInvalidArgument
  // for a fully specified system with no components.
  const SystemEntity& AddSystem(SystemEntity system);

  // Throws kUnresolvedParticipant, kInvalidState, kUnknownFlow (refines),
  // kInvalidArgument (instances in a conceptual model, measurement on a
  // conceptual model).
  const Flow& DefineFlow(Flow flow);

  // Throws kUnknownFlow, kConceptualModelNotInstantiable, kInvalidArgument
  // (measurement flow without a dataset).
  const FlowInstance& InstantiateFlow(const std::string& flow_id,
                                      std::string instance_id = "",
                                      std::string executed_at = "");

  // Knot edges are classified here; any `knot` flags on input are ignored.
  // Throws kUnknownFlow.
  const Mesh& BuildMesh(std::string id, std::vector<std::string> flow_ids,
                        std::vector<MeshEdge> edges);

  // Throws kUnknownModel, kMethodFlowNotQuestionable, kUnknownRQ (parent),
  // kUnknownEntity / kUnknownDimension (aspect target), kInvalidArgument.
  const ResearchQuestion& DefineRq(ResearchQuestion rq);

  // Throws kUnknownModel, kMethodFlowNotQuestionable, kInvalidState.
  const Hypothesis& DefineHypothesis(Hypothesis hypothesis);

  // Registers an instrument. Re-registering an identical record is a no-op;
  // a different record under the same id is kDuplicateId.
  const Instrument& AddInstrument(Instrument instrument);

  // Throws kUnknownFlow, kNotMeasurementFlow, kInvalidArgument (datapoint
  // recorded by an instrument not in the set, dataset already attached),
  // kDuplicateId.
  const DataSet& AttachDataset(const std::string& flow_id,
                               std::vector<Instrument> instruments,
                               std::vector<DataPoint> datapoints,
                               std::string reliability_note,
                               std::string validity_note,
                               std::string dataset_id = "");

  // Throws kUnknownTarget.
  const Comment& AddComment(Comment comment);

  // Throws kUnknownRQ.
  void SetRqAnswer(const std::string& rq_id, RqAnswer answer);

  // ---- queries

  // Flows (by id) whose effects change (entity, dimension), one entry per
  // cause participant. Throws kUnknownEntity.
  std::vector<Determinant> QueryDeterminants(const std::string& entity_id,
                                             const std::string& dimension) const;

  // Transitive closure excluding the class itself. Throws kUnknownClass.
  std::set<std::string> Closure(Relation relation,
                                const std::string& class_id) const;

  // Declared plus inherited dimensions (inherited states first).
  std::vector<Dimension> EffectiveDimensions(const std::string& class_id) const;

  // Class of a class or instance ref; nullopt for systems and unknown ids.
  std::optional<std::string> ClassOf(const std::string& entity_id) const;

  std::optional<ElementKind> KindOf(const std::string& id) const;
  bool IsEntity(const std::string& id) const;
  bool StateDeclared(const std::string& entity_id, const std::string& dimension,
                     const std::string& state) const;

  // Full traversal check of both class graphs.
  bool RelationGraphsAcyclic() const;

  const std::map<std::string, EntityClass>& classes() const { return classes_; }
  const std::map<std::string, EntityInstance>& instances() const {
    return instances_;
  }
  const std::map<std::string, SystemEntity>& systems() const { return systems_; }
  const std::map<std::string, Flow>& flows() const { return flows_; }
  const std::map<std::string, FlowInstance>& flow_instances() const {
    return flow_instances_;
  }
  const std::map<std::string, Mesh>& meshes() const { return meshes_; }
  const std::map<std::string, ResearchQuestion>& research_questions() const {
    return rqs_;
  }
  const std::map<std::string, Hypothesis>& hypotheses() const {
    return hypotheses_;
  }
  const std::map<std::string, DataSet>& datasets() const { return datasets_; }
  const std::map<std::string, Instrument>& instruments() const {
    return instruments_;
  }
  const std::map<std::string, Comment>& comments() const { return comments_; }

  const Flow* FindFlow(const std::string& id) const;
  const EntityClass* FindClass(const std::string& id) const;

  Json ToJson() const;
  // Throws kCorruptStore.
  static KnowledgeBase FromJson(const Json& j);

  bool operator==(const KnowledgeBase& other) const;

 private:
  std::string NewId(std::string_view prefix);
  void RequireFreshId(const std::string& id) const;
  void RequireEntity(const std::string& id, ErrorCode code) const;
  void ValidateDimensions(const std::vector<Dimension>& dims) const;
  bool Reaches(Relation relation, const std::string& from,
               const std::string& to) const;
  void ValidateStateRef(const std::string& entity, const std::string& dimension,
                        const std::optional<std::string>& state,
                        ErrorCode code) const;
  const std::vector<std::string>& Edges(const EntityClass& c,
                                        Relation relation) const;

  std::map<std::string, EntityClass> classes_;
  std::map<std::string, EntityInstance> instances_;
  std::map<std::string, SystemEntity> systems_;
  std::map<std::string, Flow> flows_;
  std::map<std::string, FlowInstance> flow_instances_;
  std::map<std::string, Mesh> meshes_;
  std::map<std::string, ResearchQuestion> rqs_;
  std::map<std::string, Hypothesis> hypotheses_;
  std::map<std::string, DataSet> datasets_;
  std::map<std::string, Instrument> instruments_;
  std::map<std::string, Comment> comments_;
  uint64_t next_sequence_ = 1;
  uint64_t executions_ = 0;
  SpanResolver span_resolver_;
};

// JSON forms of individual elements, shared by persistence and the command
// interface. Decoders accept missing optional fields and throw
// kCorruptStore naming the bad field.
Json ToJson(const EntityClass& v);
Json ToJson(const EntityInstance& v);
Json ToJson(const SystemEntity& v);
Json ToJson(const Flow& v);
Json ToJson(const FlowInstance& v);
Json ToJson(const Mesh& v);
Json ToJson(const ResearchQuestion& v);
Json ToJson(const Hypothesis& v);
Json ToJson(const Instrument& v);
Json ToJson(const DataSet& v);
Json ToJson(const Comment& v);
Json ToJson(const StateChange& v);

EntityClass ClassFromJson(const Json& j, std::string_view where);
EntityInstance InstanceFromJson(const Json& j, std::string_view where);
SystemEntity SystemFromJson(const Json& j, std::string_view where);
Flow FlowFromJson(const Json& j, std::string_view where);
FlowInstance FlowInstanceFromJson(const Json& j, std::string_view where);
Mesh MeshFromJson(const Json& j, std::string_view where);
std::vector<MeshEdge> MeshEdgesFromJson(const Json& arr, std::string_view where);
ResearchQuestion RqFromJson(const Json& j, std::string_view where);
Hypothesis HypothesisFromJson(const Json& j, std::string_view where);
Instrument InstrumentFromJson(const Json& j, std::string_view where);
DataPoint DataPointFromJson(const Json& j, std::string_view where);
DataSet DataSetFromJson(const Json& j, std::string_view where);
Comment CommentFromJson(const Json& j, std::string_view where);
StateChange StateChangeFromJson(const Json& j, std::string_view where);
std::optional<Relation> ParseRelation(std::string_view name);

}  // namespace scibrowse

#endif  // SCIBROWSE_CONCEPT_KB_H_
