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

// Command-line front end. Every verb loads the library from --root (or
// $SCIBROWSE_ROOT), runs, saves if it mutated, and prints JSON to stdout.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scibrowse/article_json.h"
#include "scibrowse/ingest.h"
#include "scibrowse/library.h"
#include "scibrowse/navigation.h"
#include "scibrowse/references.h"
#include "scibrowse/service.h"

namespace {

using scibrowse::Error;
using scibrowse::ErrorCode;
using scibrowse::Json;

std::string ReadInput(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "block_id:start:end"; block ids contain '/' but never ':'.
scibrowse::Span ParseSpan(const std::string& text) {
  const size_t b = text.rfind(':');
  const size_t a = b == std::string::npos ? b : text.rfind(':', b - 1);
  if (a == std::string::npos || a == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "span must look like BLOCK:START:END, got '" + text + "'");
  }
  try {
    return {text.substr(0, a), std::stoul(text.substr(a + 1, b - a - 1)),
            std::stoul(text.substr(b + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad span offsets in '" + text + "'");
  }
}

Json WarningsJson(const std::vector<scibrowse::Warning>& warnings) {
  Json arr = Json::array();
  for (const auto& w : warnings) {
    Json j = Json::object();
    j["code"] = w.code;
    j["message"] = w.message;
    j["line"] = w.line;
    j["column"] = w.column;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json ReportJson(const scibrowse::IngestReport& r) {
  Json j = Json::object();
  j["article_id"] = r.article_id;
  j["sections_found"] = r.sections_found;
  j["references_found"] = r.references_found;
  j["citation_marks_found"] = r.citation_marks_found;
  j["grouped_marks_split"] = r.grouped_marks_split;
  j["warnings"] = WarningsJson(r.warnings);
  return j;
}

void Print(const Json& j) { std::cout << scibrowse::CanonicalDump(j); }

std::string DefaultRoot() {
  const char* env = std::getenv("SCIBROWSE_ROOT");
  return env != nullptr && *env != '\0' ? env : "scibrowse-data";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Browse segmented scholarly articles and their models"};
  app.require_subcommand(1);
  std::string root = DefaultRoot();
  app.add_option("--root", root, "Library directory (default $SCIBROWSE_ROOT)");

  std::vector<std::string> ingest_files;
  auto* ingest = app.add_subcommand("ingest", "Ingest JATS XML files");
  ingest->add_option("files", ingest_files, "XML files")->required();

  std::string validate_file;
  auto* validate = app.add_subcommand("validate",
                                      "Parse a JSON file without storing it, or "
                                      "lint the library when no file is given");
  validate->add_option("file", validate_file, "XML file");

  std::string article_id, selected, order = "appearance";
  auto* toc = app.add_subcommand("toc", "Table of contents");
  toc->add_option("article", article_id)->required();
  toc->add_option("--select", selected, "Expand this level-1 section");

  auto* refs = app.add_subcommand("refs", "Reference order and renumbering");
  refs->add_option("article", article_id)->required();
  refs->add_option("--order", order, "appearance|alphabetical|original");

  auto* blocks = app.add_subcommand("blocks", "Discourse blocks of an article");
  blocks->add_option("article", article_id)->required();

  auto* kb = app.add_subcommand("kb", "Knowledgebase commands");
  kb->require_subcommand(1);
  std::string commands_file, store_id;
  auto* kb_apply = kb->add_subcommand("apply", "Apply a JSON command file");
  kb_apply->add_option("file", commands_file,
                       "Command array, or {\"store\", \"commands\"}")
      ->required();
  kb_apply->add_option("--store", store_id, "Article id or 'shared'");
  auto* kb_show = kb->add_subcommand("show", "Print a store's knowledgebase");
  kb_show->add_option("store", store_id)->required();

  auto* anchor = app.add_subcommand("anchor", "Citation anchors");
  anchor->require_subcommand(1);
  std::string span_text, element, topic, anchor_id, mark_id, role, links_file,
      anchor_new_id;
  auto* anchor_add = anchor->add_subcommand("add", "Register an anchor");
  anchor_add->add_option("article", article_id)->required();
  auto* span_opt = anchor_add->add_option("--span", span_text, "BLOCK:START:END");
  anchor_add->add_option("--element", element, "Knowledgebase element or block id")
      ->excludes(span_opt);
  anchor_add->add_option("--topic", topic)->required();
  anchor_add->add_option("--id", anchor_new_id);
  auto* anchor_mention = anchor->add_subcommand("mention", "Annotate a mention");
  anchor_mention->add_option("anchor", anchor_id)->required();
  anchor_mention->add_option("--span", span_text, "BLOCK:START:END")->required();
  auto* anchor_link = anchor->add_subcommand("link", "Link a citation mark");
  anchor_link->add_option("citing_article", article_id)->required();
  anchor_link->add_option("mark", mark_id)->required();
  anchor_link->add_option("anchor", anchor_id)->required();
  anchor_link->add_option("--role", role)->required();
  auto* anchor_context = anchor->add_subcommand("context", "Context summary");
  anchor_context->add_option("anchor", anchor_id)->required();
  auto* anchor_backlinks = anchor->add_subcommand("backlinks", "Inbound links");
  anchor_backlinks->add_option("article", article_id)->required();
  auto* anchor_export = anchor->add_subcommand("export", "Links as JSON lines");
  auto* anchor_import = anchor->add_subcommand("import", "Import JSON lines");
  anchor_import->add_option("file", links_file)->required();

  auto* lint = app.add_subcommand("lint", "Cross-store consistency report");

  std::string instrument_id;
  auto* usages = app.add_subcommand("usages", "Cluster an instrument's uses");
  usages->add_option("instrument", instrument_id)->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port);
  serve->add_option("--host", host);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed() && !validate_file.empty()) {
      auto parsed = scibrowse::ParseArticleWithWarnings(
          {validate_file, ReadInput(validate_file), "jats_xml"});
      Json j = Json::object();
      j["article_id"] = parsed.article.id;
      j["sections"] = scibrowse::CountSections(parsed.article);
      j["references"] = parsed.article.references.size();
      j["citation_marks"] = scibrowse::CountMarks(parsed.article);
      j["warnings"] = WarningsJson(parsed.warnings);
      Print(j);
      return 0;
    }

    scibrowse::Library lib = scibrowse::Library::Load(root);
    bool mutated = false;

    if (ingest->parsed()) {
      Json out = Json::array();
      for (const auto& f : ingest_files) {
        out.push_back(ReportJson(lib.IngestXml(ReadInput(f), f)));
      }
      mutated = true;
      Print(out);
    } else if (validate->parsed() || lint->parsed()) {
      auto report = lib.ConsistencyLint();
      Print(scibrowse::ToJson(report));
      if (!report.empty()) return 1;
    } else if (toc->parsed()) {
      const auto& store = lib.GetArticle(article_id);
      auto entries = scibrowse::ExtendToc(store.article,
                                          scibrowse::BuildToc(store.article),
                                          store.blocks.ListBlocks(store.article));
      std::optional<std::string> sel;
      if (!selected.empty()) sel = selected;
      Json j = Json::object();
      j["toc"] = scibrowse::TocToJson(entries);
      j["view"] = scibrowse::TocViewToJson(scibrowse::FisheyeSelect(entries, sel));
      Print(j);
    } else if (refs->parsed()) {
      const auto& store = lib.GetArticle(article_id);
      auto mode = scibrowse::ParseOrderMode(order);
      if (!mode) throw Error(ErrorCode::kInvalidArgument, "unknown order " + order);
      auto ord = scibrowse::OrderBy(store.article, *mode);
      auto renumbered = scibrowse::Renumber(store.article, ord);
      Print(scibrowse::ReferenceOrderToJson(store.article, ord, renumbered.map));
    } else if (blocks->parsed()) {
      const auto& store = lib.GetArticle(article_id);
      Json arr = Json::array();
      for (const auto& [id, ab] : store.blocks.activity_blocks()) {
        arr.push_back(scibrowse::ToJson(ab));
      }
      for (const auto& [id, rqb] : store.blocks.rq_blocks()) {
        arr.push_back(scibrowse::ToJson(rqb));
      }
      Print(arr);
    } else if (kb_apply->parsed()) {
      Json doc = Json::parse(ReadInput(commands_file), nullptr, false);
      if (doc.is_discarded()) {
        throw Error(ErrorCode::kInvalidArgument, commands_file + " is not JSON");
      }
      Json commands = doc;
      if (doc.is_object() && doc.contains("commands")) {
        commands = doc["commands"];
        if (store_id.empty() && doc.contains("store")) {
          store_id = doc["store"].get<std::string>();
        }
      }
      if (store_id.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "no --store given");
      }
      Print(lib.ApplyCommands(store_id, commands));
      mutated = true;
    } else if (kb_show->parsed()) {
      if (store_id == scibrowse::kSharedStoreId) {
        Print(lib.shared_kb().ToJson());
      } else {
        Print(lib.GetArticle(store_id).kb.ToJson());
      }
    } else if (anchor_add->parsed()) {
      scibrowse::AnchorTarget target;
      if (!span_text.empty()) {
        target = ParseSpan(span_text);
      } else if (!element.empty()) {
        target = element;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "give --span or --element");
      }
      Print(scibrowse::ToJson(lib.RegisterAnchor(article_id, target, topic,
                                                 anchor_new_id)));
      mutated = true;
    } else if (anchor_mention->parsed()) {
      lib.AddMention(anchor_id, ParseSpan(span_text));
      Print(scibrowse::ToJson(*lib.anchors().FindAnchor(anchor_id)));
      mutated = true;
    } else if (anchor_link->parsed()) {
      Print(scibrowse::ToJson(lib.LinkCitation(article_id, mark_id, anchor_id, role)));
      mutated = true;
    } else if (anchor_context->parsed()) {
      Print(scibrowse::ToJson(lib.Summarize(anchor_id)));
    } else if (anchor_backlinks->parsed()) {
      Json arr = Json::array();
      for (const auto& l : lib.Backlinks(article_id)) arr.push_back(scibrowse::ToJson(l));
      Print(arr);
    } else if (anchor_export->parsed()) {
      std::cout << lib.anchors().ExportLinks();
    } else if (anchor_import->parsed()) {
      Json j = Json::object();
      j["imported"] = lib.ImportLinks(ReadInput(links_file));
      Print(j);
      mutated = true;
    } else if (usages->parsed()) {
      Print(scibrowse::ToJson(lib.ClusterByMethod(instrument_id)));
    } else if (serve->parsed()) {
      scibrowse::Service service(std::move(lib), root);
      std::cerr << "serving " << root << " on http://" << host << ":" << port
                << "\n";
      if (!scibrowse::Serve(service, host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 2;
      }
      return 0;
    }

    if (mutated) lib.Save(root);
  } catch (const Error& e) {
    std::cerr << "error: " << scibrowse::ErrorCodeName(e.code()) << ": "
              << e.what() << "\n";
    return 2;
  }
  return 0;
}
