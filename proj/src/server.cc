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

#include "mgkb/server.h"

#include <sys/socket.h>

#include "httplib.h"

namespace mgkb {
namespace server {

namespace {
constexpr char kResultsType[] = "application/sparql-results+json";
}  // namespace

SparqlServer::SparqlServer(std::shared_ptr<const rdf::Graph> graph,
                           rdf::PrefixMap builtins)
    : store_(std::move(graph)),
      builtins_(std::move(builtins)),
      http_(std::make_unique<httplib::Server>()) {
  // SO_REUSEPORT would let a second server share a busy port.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto handler = [this](const httplib::Request &req, httplib::Response &res) {
    std::string query;
    if (req.has_param("query")) {
      query = req.get_param_value("query");
    } else if (req.method == "POST" &&
               req.get_header_value("Content-Type").rfind("application/sparql-query", 0) == 0) {
      query = req.body;
    } else {
      res.status = 400;
      res.set_content("missing query parameter\n", "text/plain");
      return;
    }
    Response r = Handle(query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  http_->Get("/sparql", handler);
  http_->Post("/sparql", handler);
}

SparqlServer::~SparqlServer() { Stop(); }

Response SparqlServer::Handle(const std::string &query) const {
  Response r;
  try {
    sparql::Query q = sparql::ParseQuery(query, builtins_);
    r.body = sparql::ToJson(sparql::Evaluate(q, store_));
    r.content_type = kResultsType;
  } catch (const sparql::QueryError &e) {
    r.status = 400;
    r.body = std::string(e.what()) + "\n";
    r.content_type = "text/plain";
  } catch (const std::exception &e) {
    r.status = 500;
    r.body = std::string(e.what()) + "\n";
    r.content_type = "text/plain";
  }
  return r;
}

int SparqlServer::Bind(const std::string &host, int port) {
  if (port == 0) {
    int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!http_->bind_to_port(host, port))
    throw Error("port " + std::to_string(port) + " on " + host + " is busy or unavailable");
  return port;
}

void SparqlServer::Listen() { http_->listen_after_bind(); }

void SparqlServer::Stop() {
  if (http_->is_running()) http_->stop();
}

}  // namespace server
}  // namespace mgkb
