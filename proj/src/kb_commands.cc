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

#include "scibrowse/article_store.h"

#include "scibrowse/article_json.h"

namespace scibrowse {

namespace {

std::vector<std::string> StringArray(const Json& cmd, std::string_view key) {
  std::vector<std::string> out;
  const Json& arr = RequireArray(cmd, key, "command");
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kCorruptStore,
                  "command/" + std::string(key) + ": expected string");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

Json WarningsToJson(const std::vector<Warning>& warnings) {
  Json arr = Json::array();
  for (const auto& w : warnings) {
    Json j = Json::object();
    j["code"] = w.code;
    j["message"] = w.message;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json Result(const std::string& op, const std::string& id, Json result,
            const std::vector<Warning>& warnings = {}) {
  Json j = Json::object();
  j["op"] = op;
  j["id"] = id;
  j["result"] = std::move(result);
  j["warnings"] = WarningsToJson(warnings);
  return j;
}

}  // namespace

Json ApplyKbCommand(const Article* article, KnowledgeBase& kb, BlockSet* blocks,
                    const Json& cmd, const InstrumentLookup& instruments) {
  const std::string op = RequireString(cmd, "op", "command");
  const std::string_view w = "command";

  if (op == "add_class") {
    std::vector<Warning> warnings;
    const auto& c = kb.AddClass(ClassFromJson(cmd, w), &warnings);
    return Result(op, c.id, ToJson(c), warnings);
  }
  if (op == "add_relation") {
    const std::string name = RequireString(cmd, "relation", w);
    auto relation = ParseRelation(name);
    if (!relation) {
      throw Error(ErrorCode::kInvalidArgument, "unknown relation '" + name + "'");
    }
    const std::string child = RequireString(cmd, "child", w);
    kb.AddRelation(*relation, child, RequireString(cmd, "parent", w));
    return Result(op, child, ToJson(*kb.FindClass(child)));
  }
  if (op == "instantiate") {
    const auto& v = kb.Instantiate(InstanceFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "add_system") {
    const auto& v = kb.AddSystem(SystemFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "define_flow") {
    const auto& v = kb.DefineFlow(FlowFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "instantiate_flow") {
    const auto& v = kb.InstantiateFlow(RequireString(cmd, "flow_id", w),
                                       OptionalString(cmd, "id", w),
                                       OptionalString(cmd, "executed_at", w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "build_mesh") {
    const auto& v = kb.BuildMesh(
        OptionalString(cmd, "id", w), StringArray(cmd, "flow_ids"),
        cmd.contains("edges") ? MeshEdgesFromJson(cmd["edges"], "command/edges")
                              : std::vector<MeshEdge>{});
    return Result(op, v.id, ToJson(v));
  }
  if (op == "define_rq") {
    const auto& v = kb.DefineRq(RqFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "define_hypothesis") {
    const auto& v = kb.DefineHypothesis(HypothesisFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "add_instrument") {
    const auto& v = kb.AddInstrument(InstrumentFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "attach_dataset") {
    std::vector<Instrument> list;
    const Json& arr = RequireArray(cmd, "instruments", w);
    for (size_t i = 0; i < arr.size(); ++i) {
      if (arr[i].is_object()) {
        list.push_back(
            InstrumentFromJson(arr[i], "command/instruments/" + std::to_string(i)));
        continue;
      }
      if (!arr[i].is_string()) {
        throw Error(ErrorCode::kCorruptStore,
                    "command/instruments: expected id or object");
      }
      const std::string id = arr[i].get<std::string>();
      auto local = kb.instruments().find(id);
      if (local != kb.instruments().end()) {
        list.push_back(local->second);
        continue;
      }
      std::optional<Instrument> found;
      if (instruments) found = instruments(id);
      if (!found) {
        throw Error(ErrorCode::kUnknownInstrument, "unknown instrument '" + id + "'");
      }
      list.push_back(*found);
    }
    std::vector<DataPoint> points;
    if (cmd.contains("datapoints")) {
      const Json& dps = RequireArray(cmd, "datapoints", w);
      for (size_t i = 0; i < dps.size(); ++i) {
        points.push_back(
            DataPointFromJson(dps[i], "command/datapoints/" + std::to_string(i)));
      }
    }
    const auto& v = kb.AttachDataset(
        RequireString(cmd, "flow_id", w), std::move(list), std::move(points),
        OptionalString(cmd, "reliability_note", w),
        OptionalString(cmd, "validity_note", w), OptionalString(cmd, "id", w));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "add_comment") {
    Comment c = CommentFromJson(cmd, w);
    if (article != nullptr) {
      kb.set_span_resolver(
          [article](const Span& s) { return SpanResolves(*article, s); });
    } else {
      kb.set_span_resolver(nullptr);
    }
    const auto& v = kb.AddComment(std::move(c));
    return Result(op, v.id, ToJson(v));
  }
  if (op == "define_activity_block" || op == "define_rq_block") {
    if (article == nullptr || blocks == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "blocks belong to an article store");
    }
    if (op == "define_activity_block") {
      const auto& v =
          blocks->DefineActivityBlock(*article, kb, ActivityBlockFromJson(cmd, w));
      return Result(op, v.id, ToJson(v));
    }
    const auto& v = blocks->DefineRqBlock(*article, kb, RqBlockFromJson(cmd, w));
    return Result(op, v.id, ToJson(v));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown command '" + op + "'");
}

}  // namespace scibrowse
