#include "scenelint/gateway.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <set>
#include <thread>

#include "format.hpp"
#include "httplib.h"
#include "json_util.hpp"
#include "scene_json.hpp"
#include "scenelint/io.hpp"

namespace scenelint {

using detail::Json;

GatewayError::GatewayError(const std::string& message, std::vector<std::string> attempts, std::string raw)
    : Error([&] {
        std::string m = message;
        for (const std::string& a : attempts) m += "\n  " + a;
        return m;
      }()),
      attempts_(std::move(attempts)),
      raw_(std::move(raw)) {}

GatewayConfig gateway_config_from_env() {
  GatewayConfig c;
  auto env = [](const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
  };
  c.base_url = env("SCENELINT_GATEWAY_URL");
  c.model = env("SCENELINT_MODEL");
  c.api_key = env("SCENELINT_API_KEY");
  return c;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

// ---- client -------------------------------------------------------------

GatewayClient::GatewayClient(GatewayConfig config) : config_(std::move(config)) {
  if (config_.max_attempts < 1) throw ValidationError("max_attempts", "must be >= 1");
  if (!config_.stub_dir.empty()) {
    std::error_code ec;
    if (!std::filesystem::is_directory(config_.stub_dir, ec)) {
      throw IoError(config_.stub_dir.string() + ": stub directory not found");
    }
    for (const auto& e : std::filesystem::directory_iterator(config_.stub_dir)) {
      if (e.is_regular_file()) stub_files_.push_back(e.path());
    }
    std::sort(stub_files_.begin(), stub_files_.end());
    if (stub_files_.empty()) throw IoError(config_.stub_dir.string() + ": stub directory is empty");
  } else if (config_.base_url.empty()) {
    throw ValidationError("SCENELINT_GATEWAY_URL", "gateway URL is not set");
  }
}

namespace {

std::string content_of(const Json& response) {
  const Json* choices = detail::find(response, "choices");
  if (choices == nullptr || !choices->is_array() || choices->empty()) {
    throw ParseError("response has no choices");
  }
  const Json* message = detail::find((*choices)[0], "message");
  if (message == nullptr) throw ParseError("first choice has no message");
  const Json* content = detail::find(*message, "content");
  if (content == nullptr) throw ParseError("message has no content");
  if (content->is_string()) return content->get<std::string>();
  if (content->is_array()) {
    std::string text;
    for (const Json& part : *content) {
      if (const Json* t = detail::find(part, "text"); t != nullptr && t->is_string()) text += t->get<std::string>();
    }
    return text;
  }
  throw ParseError("message content is neither text nor parts");
}

}  // namespace

std::string GatewayClient::replay_stub() {
  std::filesystem::path file;
  {
    std::lock_guard lock(stub_mutex_);
    file = stub_files_[std::min(stub_calls_, stub_files_.size() - 1)];
    ++stub_calls_;
  }
  const std::string text = read_text_file(file);
  const Json doc = Json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("choices")) {
    try {
      return content_of(doc);
    } catch (const ParseError& e) {
      throw GatewayError(file.filename().string() + ": " + e.what(), {}, text);
    }
  }
  return text;
}

std::string GatewayClient::complete(const std::string& request_json) {
  if (!config_.stub_dir.empty()) return replay_stub();

  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.base_url, m, url_re)) {
    throw ValidationError("SCENELINT_GATEWAY_URL", "expected http(s)://host[:port][/path], got '" + config_.base_url + "'");
  }
  const std::string origin = m[1].str();
  std::string path = m[2].matched ? m[2].str() : std::string();
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  std::vector<std::string> log;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(config_.base_delay * (1 << (attempt - 2)));
    httplib::Client client(origin);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    const httplib::Result res = client.Post(path, headers, request_json, "application/json");
    const std::string prefix = "attempt " + std::to_string(attempt) + ": ";
    if (!res) {
      log.push_back(prefix + "connection error: " + httplib::to_string(res.error()));
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      log.push_back(prefix + "HTTP " + std::to_string(res->status));
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      log.push_back(prefix + "HTTP " + std::to_string(res->status));
      throw GatewayError("gateway rejected the request", std::move(log), res->body);
    }
    log.push_back(prefix + "HTTP " + std::to_string(res->status));
    const Json doc = Json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) throw GatewayError("gateway returned malformed JSON", std::move(log), res->body);
    try {
      return content_of(doc);
    } catch (const ParseError& e) {
      throw GatewayError(std::string("unexpected response shape: ") + e.what(), std::move(log), res->body);
    }
  }
  throw GatewayError("gateway unavailable after " + std::to_string(config_.max_attempts) + " attempts",
                     std::move(log));
}

// ---- critic requests ----------------------------------------------------

std::string_view to_string(CriticModality modality) {
  switch (modality) {
    case CriticModality::text: return "text";
    case CriticModality::image: return "image";
    case CriticModality::image_text: return "image+text";
    case CriticModality::semantics_text: return "semantics+text";
  }
  return "text";
}

CriticModality critic_modality_from_string(std::string_view text) {
  for (auto m : {CriticModality::text, CriticModality::image, CriticModality::image_text,
                 CriticModality::semantics_text}) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError("modality", "expected text, image, image+text or semantics+text, got '" +
                                        std::string(text) + "'");
}

namespace {

constexpr const char* kSystemPrompt =
    "You review indoor furniture layouts. Check that every object lies inside the placement range, that the "
    "required inventory is placed exactly, and that no two objects overlap. Answer with one JSON object and "
    "nothing else:\n"
    "{\"reward\": <number in [0,1]>, \"notes\": [{\"label\": <object label>, \"issue\": "
    "\"out_of_bounds\"|\"missing\"|\"extra\"|\"overlap\", \"with\": <other label, overlap only>, "
    "\"amount_m\": <meters>, \"suggestion\": <short fix>}]}\n"
    "Use an empty notes list when the layout has no issues.";

std::string mime_for(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".webp") return "image/webp";
  if (ext == ".gif") return "image/gif";
  return "image/png";
}

Json semantics_for(const Ontology& ontology, const SceneLayout& layout) {
  Json priors = Json::object();
  std::set<std::string> labels;
  for (const ObjectInstance& o : layout.objects) labels.insert(canonical_label(o.label));
  for (const std::string& label : labels) {
    const CategoryEntry* e = ontology.find(label);
    if (e == nullptr) continue;
    Json j = Json::object();
    if (e->dimension.width) j["width_p5_p95"] = Json::array({e->dimension.width->p5, e->dimension.width->p95});
    if (e->dimension.height) j["height_p5_p95"] = Json::array({e->dimension.height->p5, e->dimension.height->p95});
    Json co = Json::array();
    for (const auto& [other, edge] : e->cooccurrence) {
      if (labels.contains(other)) co.push_back(Json{{"with", other}, {"p_b_given_a", edge.p_b_given_a}});
    }
    if (!co.empty()) j["cooccurrence"] = std::move(co);
    if (e->orientation.back_to_wall) j["back_to_wall_fraction"] = e->orientation.back_to_wall->fraction;
    priors[label] = std::move(j);
  }
  return priors;
}

}  // namespace

std::string build_critic_request(const GatewayConfig& config, CriticModality modality, const SceneLayout& layout,
                                 const PlacementCondition& condition, const Ontology* ontology,
                                 const std::vector<std::filesystem::path>& images) {
  const bool wants_images = modality == CriticModality::image || modality == CriticModality::image_text;
  if (wants_images && images.empty()) {
    throw ValidationError("images", std::string(to_string(modality)) + " critique needs at least one image");
  }
  if (modality == CriticModality::semantics_text && ontology == nullptr) {
    throw ValidationError("ontology", "semantics+text critique needs an ontology");
  }
  std::string text = "Placement condition:\n" + detail::condition_to_json(condition).dump(2) + "\n";
  if (modality != CriticModality::image) {
    text += "\nLayout (centers, footprint w/h in meters, yaw in degrees):\n" +
            detail::layout_to_json(layout).dump(2) + "\n";
  } else {
    text += "\nThe layout is shown in the attached top-down rendering.\n";
  }
  if (modality == CriticModality::semantics_text) {
    text += "\nCategory priors from an indoor scene ontology:\n" + semantics_for(*ontology, layout).dump(2) + "\n";
  }

  Json content = Json::array();
  content.push_back(Json{{"type", "text"}, {"text", text}});
  if (wants_images) {
    for (const auto& img : images) {
      const std::string url = "data:" + mime_for(img) + ";base64," + base64_encode(read_text_file(img));
      content.push_back(Json{{"type", "image_url"}, {"image_url", Json{{"url", url}}}});
    }
  }
  Json messages = Json::array();
  messages.push_back(Json{{"role", "system"}, {"content", kSystemPrompt}});
  messages.push_back(Json{{"role", "user"}, {"content", std::move(content)}});
  Json req = Json{{"model", config.model}, {"messages", std::move(messages)}, {"temperature", 0}};
  return req.dump(-1, ' ', false, Json::error_handler_t::replace);
}

// ---- response parsing ---------------------------------------------------

CriticFeedback parse_critic_response(std::string_view content, const SceneLayout& layout,
                                     const PlacementCondition& condition) {
  const std::string raw(content);
  const std::size_t open = raw.find('{');
  const std::size_t close = raw.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw GatewayError("critic response holds no JSON object", {}, raw);
  }
  const Json doc = Json::parse(raw.substr(open, close - open + 1), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw GatewayError("critic response JSON is malformed", {}, raw);
  const Json* reward = detail::find(doc, "reward");
  if (reward == nullptr || !reward->is_number()) throw GatewayError("critic response lacks a numeric reward", {}, raw);

  CriticFeedback f;
  f.reward = reward->get<double>();
  if (!std::isfinite(f.reward)) throw GatewayError("critic reward is not finite", {}, raw);
  if (f.reward < 0.0 || f.reward > 1.0) {
    f.warnings.push_back("reward " + detail::fixed(f.reward, 4) + " clamped to [0, 1]");
    f.reward = std::clamp(f.reward, 0.0, 1.0);
  }

  std::set<std::string> known;
  for (const ObjectInstance& o : layout.objects) known.insert(canonical_label(o.label));
  for (const RequiredObject& r : condition.required_objects) known.insert(canonical_label(r.label));

  const Json* notes = detail::find(doc, "notes");
  if (notes == nullptr) return f;
  if (!notes->is_array()) throw GatewayError("critic notes must be a list", {}, raw);
  for (std::size_t i = 0; i < notes->size(); ++i) {
    const Json& n = (*notes)[i];
    const std::string where = "notes[" + std::to_string(i) + "]";
    const Json* label = detail::find(n, "label");
    const Json* issue = detail::find(n, "issue");
    if (label == nullptr || !label->is_string() || issue == nullptr || !issue->is_string()) {
      f.warnings.push_back(where + ": dropped, needs string label and issue");
      continue;
    }
    CriticNote note;
    note.label = label->get<std::string>();
    if (!known.contains(canonical_label(note.label))) {
      f.warnings.push_back(where + ": dropped, unknown label '" + note.label + "'");
      continue;
    }
    try {
      note.issue = issue_kind_from_string(issue->get<std::string>());
    } catch (const ParseError&) {
      f.warnings.push_back(where + ": dropped, unknown issue '" + issue->get<std::string>() + "'");
      continue;
    }
    if (const Json* w = detail::find(n, "with"); w != nullptr && w->is_string()) note.with = w->get<std::string>();
    if (const Json* a = detail::find(n, "amount_m"); a != nullptr && a->is_number()) note.amount_m = a->get<double>();
    if (const Json* s = detail::find(n, "suggestion"); s != nullptr && s->is_string()) {
      note.suggestion = s->get<std::string>();
    }
    if (const Json* idx = detail::find(n, "object_index");
        idx != nullptr && idx->is_number_unsigned() && idx->get<std::size_t>() < layout.objects.size()) {
      note.object_index = idx->get<std::size_t>();
    }
    f.notes.push_back(std::move(note));
  }
  return f;
}

ModelCritic::ModelCritic(GatewayClient& client, CriticModality modality, const Ontology* ontology,
                         std::vector<std::filesystem::path> images)
    : client_(client), modality_(modality), ontology_(ontology), images_(std::move(images)) {}

CriticFeedback ModelCritic::critique(const SceneLayout& layout, const PlacementCondition& condition) {
  const std::string request =
      build_critic_request(client_.config(), modality_, layout, condition, ontology_, images_);
  return parse_critic_response(client_.complete(request), layout, condition);
}

}  // namespace scenelint
