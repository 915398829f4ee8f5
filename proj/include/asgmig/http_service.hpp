#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "asgmig/session.hpp"

namespace httplib {
class Server;
}

namespace asgmig {

struct ApiRequest {
  std::string method;  // GET or POST
  std::string path;    // e.g. /api/models/oo/tree
  std::map<std::string, std::string> query;
  std::string body;    // JSON for POST
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// JSON API over one session. Every state-changing endpoint runs exactly one
/// engine directive; calls are serialized.
///
///   GET  /api/models
///   GET  /api/models/{alias}/tree
///   GET  /api/models/{alias}/nodes/{id}/source
///   GET  /api/rules?source=..&target=..
///   GET  /api/context?path=..            mappings and unresolved references
///   GET  /api/history
///   GET  /api/log?since=N
///   POST /api/produce   {source, target, mode}
///   POST /api/map       {source, target, scope?, mode}
///   POST /api/choices/{token}   {answer} or {cancel: true}
///   POST /api/rollback  {transaction?}
///   POST /api/export    {alias, dir?}
class HttpService {
 public:
  HttpService(Session& session, std::string export_dir = ".");
  ~HttpService();

  ApiResponse handle(const ApiRequest& request);

  /// Blocking listen; port 0 picks a free port and reports it via on_ready.
  /// Returns false when binding fails.
  bool serve(const std::string& host, int port,
             const std::function<void(int)>& on_ready = {});
  void stop();

 private:
  struct Pending {
    std::string kind;  // produce or map
    std::string body;  // original request
    std::vector<std::size_t> answers;
    std::uint64_t generation = 0;
  };

  ApiResponse dispatch(const ApiRequest& request);
  ApiResponse run_directive(const std::string& kind, const std::string& body,
                            std::vector<std::size_t> answers);

  Session& session_;
  std::string export_dir_;
  std::mutex mutex_;
  std::map<std::string, Pending> pending_;
  std::uint64_t generation_ = 0;
  std::uint64_t next_token_ = 1;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace asgmig
