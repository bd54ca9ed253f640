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

#include "scibrowse/service.h"

#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "scibrowse/references.h"
#include "test_support.h"

namespace scibrowse {
namespace {

constexpr char kCited[] = "10.9999/neuro.cited.0001";
constexpr char kCiting[] = "10.9999/neuro.citing.0002";

HttpRequest Get(std::string path, std::map<std::string, std::string> params = {}) {
  return {"GET", std::move(path), std::move(params), ""};
}

HttpRequest Post(std::string path, std::string body) {
  return {"POST", std::move(path), {}, std::move(body)};
}

Json Body(const HttpResponse& r) { return Json::parse(r.body); }

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const char* n : {"neuro_cited.xml", "neuro_citing.xml"}) {
      auto r = service_.Handle(
          Post("/ingest", testing::ReadFile(testing::FixturePath(n))));
      ASSERT_EQ(r.status, 200) << r.body;
    }
    auto r = service_.Handle(Post(std::string("/kb/") + kCited + "/commands",
                                  testing::Fig3Commands().dump()));
    ASSERT_EQ(r.status, 200) << r.body;
  }

  Service service_{Library()};
};

TEST_F(ServiceTest, ArticleViews) {
  Json list = Body(service_.Handle(Get("/articles")));
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0]["id"], kCited);

  const std::string base = std::string("/articles/") + kCited;
  EXPECT_EQ(Body(service_.Handle(Get(base)))["id"], kCited);

  Json toc = Body(service_.Handle(Get(base + "/toc", {{"selected", "s2"}})));
  EXPECT_EQ(toc["view"]["selected"], "s2");
  EXPECT_EQ(toc["view"]["entries"].size(), 4u + 3u);

  Json model = Body(service_.Handle(Get(base + "/model")));
  EXPECT_EQ(model["kb"]["flows"].size(), 3u);

  Json blocks = Body(service_.Handle(Get(base + "/blocks")));
  EXPECT_TRUE(blocks["blocks"].empty());

  EXPECT_TRUE(Body(service_.Handle(Get(base + "/backlinks")))["backlinks"].empty());
}

TEST_F(ServiceTest, ReferencesCarryBijection) {
  const std::string path = std::string("/articles/") + kCited + "/references";
  for (const char* mode : {"appearance", "alphabetical", "original"}) {
    Json j = Body(service_.Handle(Get(path, {{"order", mode}})));
    RenumberMap map;
    for (const auto& p : j["renumber_map"]) {
      map.pairs[p["original_number"].get<int>()] = p["display_number"].get<int>();
    }
    EXPECT_TRUE(map.IsBijection(static_cast<int>(j["references"].size()))) << mode;
    EXPECT_FALSE(j["marks"].empty());
  }
  EXPECT_EQ(service_.Handle(Get(path, {{"order", "random"}})).status, 400);
}

TEST_F(ServiceTest, Errors) {
  HttpResponse r = service_.Handle(Get("/articles/nope/toc"));
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(Body(r)["error"]["code"], "UnknownArticle");
  EXPECT_EQ(service_.Handle(Get("/anchors/ghost/context")).status, 404);
  EXPECT_EQ(service_.Handle(Get("/instruments/ghost/usages")).status, 404);
  EXPECT_EQ(service_.Handle(Get("/elsewhere")).status, 404);
  EXPECT_EQ(service_.Handle(Post("/ingest", "<html/>")).status, 400);
  EXPECT_EQ(service_.Handle(Post("/ingest", "")).status, 400);
  EXPECT_EQ(service_.Handle(Post(std::string("/kb/") + kCited + "/commands", "{")).status,
            400);
  HttpResponse bad = service_.Handle(Post(std::string("/kb/") + kCited + "/commands",
                                          R"({"op": "define_rq", "model_ids": ["disable_nad_synthesis"]})"));
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(Body(bad)["error"]["code"], "MethodFlowNotQuestionable");
  EXPECT_EQ(service_.Handle({"DELETE", "/articles", {}, ""}).status, 405);
}

TEST_F(ServiceTest, AnchorContextAndUsages) {
  // Anchors are authored through the library; the service only reads them.
  Library lib = service_.Read([](const Library& l) { return l; });
  const Anchor& a = lib.RegisterAnchor(kCited, Span{"s2.2/b0", 102, 133},
                                       "light-induced neurodegeneration");
  lib.ApplyCommands("shared", {{"op", "add_instrument"}, {"id", "rig"}});
  Service s(std::move(lib));
  Json ctx = Body(s.Handle(Get("/anchors/" + a.id + "/context")));
  EXPECT_EQ(ctx["entries"][0]["kind"], "first_introduction");
  EXPECT_EQ(ctx["entries"].back()["kind"], "abstract_presence");
  EXPECT_EQ(ctx["entries"].back()["present"], false);
  Json usages = Body(s.Handle(Get("/instruments/rig/usages")));
  EXPECT_EQ(usages["instrument_id"], "rig");
}

TEST_F(ServiceTest, GetsDoNotMutate) {
  const std::string before = service_.StateHash();
  const std::vector<HttpRequest> gets = {
      Get("/articles"),
      Get(std::string("/articles/") + kCited),
      Get(std::string("/articles/") + kCited + "/toc", {{"selected", "s1"}}),
      Get(std::string("/articles/") + kCiting + "/references",
          {{"order", "alphabetical"}}),
      Get(std::string("/articles/") + kCited + "/blocks"),
      Get(std::string("/articles/") + kCited + "/model"),
      Get(std::string("/articles/") + kCited + "/backlinks"),
      Get("/articles/missing/toc")};
  for (int i = 0; i < 100; ++i) service_.Handle(gets[i % gets.size()]);
  EXPECT_EQ(service_.StateHash(), before);
}

TEST_F(ServiceTest, PostsPersistWhenRooted) {
  auto dir = testing::TempDir("service");
  Service rooted(service_.Read([](const Library& l) { return l; }), dir);
  auto r = rooted.Handle(Post("/kb/shared/commands",
                              R"([{"op": "add_instrument", "id": "rig"}])"));
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(Library::Load(dir).shared_kb().instruments().size(), 1u);
}

TEST_F(ServiceTest, OverHttp) {
  httplib::Server server;
  service_.Mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get(std::string("/articles/") + kCited +
                        "/references?order=alphabetical");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body)["order"], "alphabetical");

  httplib::MultipartFormDataItems items = {
      {"file", testing::ReadFile(testing::FixturePath("pone.0000217.xml")),
       "pone.0000217.xml", "application/xml"}};
  auto up = client.Post("/ingest", items);
  ASSERT_TRUE(up);
  EXPECT_EQ(up->status, 200) << up->body;
  EXPECT_EQ(Json::parse(up->body)["references_found"], 33);
  server.stop();
  t.join();
}

}  // namespace
}  // namespace scibrowse
