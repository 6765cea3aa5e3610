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

#ifndef MGKB_SERVER_H_
#define MGKB_SERVER_H_

#include <memory>
#include <string>

#include "mgkb/rdf.h"
#include "mgkb/sparql.h"

namespace httplib {
class Server;
}

namespace mgkb {
namespace server {

struct Response {
  int status = 200;
  std::string content_type;
  std::string body;
};

// Read-only SPARQL endpoint at /sparql over an immutable graph.
class SparqlServer {
 public:
  SparqlServer(std::shared_ptr<const rdf::Graph> graph, rdf::PrefixMap builtins);
  ~SparqlServer();

  // Status 200 with results JSON, 400 on query errors.
  Response Handle(const std::string &query) const;

  // Port 0 picks a free port. Returns the bound port; throws when busy.
  int Bind(const std::string &host, int port);
  // Blocks until Stop().
  void Listen();
  void Stop();

 private:
  sparql::Store store_;
  rdf::PrefixMap builtins_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace server
}  // namespace mgkb

#endif  // MGKB_SERVER_H_
