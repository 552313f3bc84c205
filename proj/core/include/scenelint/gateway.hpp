#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "scenelint/errors.hpp"
#include "scenelint/ontology.hpp"
#include "scenelint/refine.hpp"
#include "scenelint/scene.hpp"

namespace scenelint {

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
struct GatewayConfig {
  /// Base URL such as "https://host/v1"; requests go to <base>/chat/completions.
  std::string base_url;
  std::string model;
  std::string api_key;
  int max_attempts = 3;
  /// Delay before retry k (1-based) is base_delay * 2^(k-1).
  std::chrono::milliseconds base_delay{500};
  std::chrono::seconds timeout{60};
  /// When set, responses are replayed from the files in this directory
  /// (sorted by name) instead of contacting the endpoint.
  std::filesystem::path stub_dir;
};

/// Reads SCENELINT_GATEWAY_URL, SCENELINT_MODEL and SCENELINT_API_KEY.
GatewayConfig gateway_config_from_env();

/// Failed request after all attempts, or a response that could not be used.
class GatewayError : public Error {
 public:
  GatewayError(const std::string& message, std::vector<std::string> attempts, std::string raw = {});
  const std::vector<std::string>& attempts() const noexcept { return attempts_; }
  /// Response body or message content as received.
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::vector<std::string> attempts_;
  std::string raw_;
};

/// Thread-safe: each request opens its own connection.
class GatewayClient {
 public:
  explicit GatewayClient(GatewayConfig config);

  /// Posts a chat-completions request body and returns the first choice's
  /// message content.
  std::string complete(const std::string& request_json);

  const GatewayConfig& config() const noexcept { return config_; }

 private:
  std::string replay_stub();

  GatewayConfig config_;
  std::mutex stub_mutex_;
  std::vector<std::filesystem::path> stub_files_;
  std::size_t stub_calls_ = 0;
};

enum class CriticModality { text, image, image_text, semantics_text };

std::string_view to_string(CriticModality modality);
/// Accepts "text", "image", "image+text", "semantics+text".
CriticModality critic_modality_from_string(std::string_view text);

/// Builds the chat request for one critique. Image modalities embed each
/// file in `images` as a base64 data URL; semantics+text adds ontology
/// priors for the placed categories.
std::string build_critic_request(const GatewayConfig& config, CriticModality modality, const SceneLayout& layout,
                                 const PlacementCondition& condition, const Ontology* ontology,
                                 const std::vector<std::filesystem::path>& images);

/// Extracts the JSON block {"reward": r, "notes": [...]} from free text.
/// Notes naming labels absent from both the layout and the inventory, or
/// unknown issue kinds, are dropped with a warning. Throws GatewayError
/// carrying `content` when no usable block is found.
CriticFeedback parse_critic_response(std::string_view content, const SceneLayout& layout,
                                     const PlacementCondition& condition);

std::string base64_encode(std::string_view bytes);

class ModelCritic final : public Critic {
 public:
  ModelCritic(GatewayClient& client, CriticModality modality, const Ontology* ontology = nullptr,
              std::vector<std::filesystem::path> images = {});
  CriticFeedback critique(const SceneLayout& layout, const PlacementCondition& condition) override;

 private:
  GatewayClient& client_;
  CriticModality modality_;
  const Ontology* ontology_;
  std::vector<std::filesystem::path> images_;
};

}  // namespace scenelint
