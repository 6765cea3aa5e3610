// Copyright 2026 The mgkb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: pipeline stages, queries and the endpoint.

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "mgkb/kb.h"
#include "mgkb/pipeline.h"
#include "mgkb/rdf.h"
#include "mgkb/server.h"
#include "mgkb/sparql.h"

namespace {

mgkb::server::SparqlServer *g_server = nullptr;

void StopServer(int) {
  if (g_server) g_server->Stop();
}

std::shared_ptr<const mgkb::rdf::Graph> LoadGraph(const std::string &path) {
  return std::make_shared<const mgkb::rdf::Graph>(
      mgkb::rdf::ParseNTriples(mgkb::ReadFile(path)));
}

mgkb::rdf::PrefixMap Prefixes(const std::string &path) {
  return path.empty() ? mgkb::kb::DefaultPrefixes() : mgkb::kb::LoadPrefixes(path);
}

void PrintStage(const mgkb::pipeline::StageResult &r) {
  std::cout << r.stage << ": " << r.manifest["counts"].dump();
  if (!r.warnings.empty()) std::cout << " (" << r.warnings.size() << " warnings)";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Migration attitudes knowledge base pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  app.add_option("--config", config_path, "Pipeline config (JSON)");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", threads, "Override the thread count");
  app.add_option("--out", out, "Override the output directory");

  std::vector<std::pair<std::string, CLI::App *>> stages;
  for (const auto &name : mgkb::pipeline::StageNames())
    stages.emplace_back(name, app.add_subcommand(name, "Run the " + name + " stage"));
  CLI::App *all = app.add_subcommand("all", "Run every stage in order");

  std::string graph_path, query_path, format = "both", namespaces;
  CLI::App *query = app.add_subcommand("query", "Evaluate a query against an .nt graph");
  query->add_option("--graph", graph_path, "N-Triples file")->required();
  query->add_option("--query", query_path, "Query file")->required();
  query->add_option("--format", format, "table, json or both")
      ->check(CLI::IsMember({"table", "json", "both"}));
  query->add_option("--namespaces", namespaces, "Prefix map (JSON)");

  std::string host = "127.0.0.1";
  int port = 8080;
  CLI::App *serve = app.add_subcommand("serve", "Serve /sparql over an .nt graph");
  serve->add_option("--graph", graph_path, "N-Triples file")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--namespaces", namespaces, "Prefix map (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (query->parsed()) {
      auto graph = LoadGraph(graph_path);
      auto prefixes = Prefixes(namespaces);
      auto q = mgkb::sparql::ParseQuery(mgkb::ReadFile(query_path), prefixes);
      auto rs = mgkb::sparql::Evaluate(q, mgkb::sparql::Store(graph));
      if (format != "json") std::cout << mgkb::sparql::ToTable(rs, prefixes);
      if (format == "both") std::cout << "\n";
      if (format != "table") std::cout << mgkb::sparql::ToJson(rs);
      return 0;
    }
    if (serve->parsed()) {
      mgkb::server::SparqlServer server(LoadGraph(graph_path), Prefixes(namespaces));
      int bound = server.Bind(host, port);
      g_server = &server;
      std::signal(SIGINT, StopServer);
      std::signal(SIGTERM, StopServer);
      std::cout << "serving http://" << host << ":" << bound << "/sparql" << std::endl;
      server.Listen();
      return 0;
    }
    if (config_path.empty()) throw mgkb::Error("--config is required for pipeline stages");
    auto config = mgkb::pipeline::LoadConfig(config_path, {seed, threads, out});
    if (all->parsed()) {
      for (const auto &r : mgkb::pipeline::RunAll(config)) PrintStage(r);
      return 0;
    }
    for (const auto &[name, sub] : stages)
      if (sub->parsed()) PrintStage(mgkb::pipeline::RunStage(name, config));
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
