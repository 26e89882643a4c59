#pragma once

#include <memory>
#include <string>

namespace argprobe {

class AnnotationStore;

/// HTTP/JSON front end for an AnnotationStore.
///
///   GET  /v1/health
///   POST /v1/sessions                  {"annotator_id": "...", "seed": n?}
///   GET  /v1/sessions/{id}
///   GET  /v1/sessions/{id}/next
///   POST /v1/sessions/{id}/ratings     {"item": position, "value": 0..99}
///   GET  /v1/export                    annotation TSV
///
/// Items are addressed by their position in the session, so clients never see sentence
/// ids or any case metadata. Errors are {"error": message} with 400, 404 or 409.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationStore& store);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds to an ephemeral port and returns it; -1 on failure.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  bool run();
  void stop();
  bool wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace argprobe
