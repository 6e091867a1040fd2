#include "cwe_analyzer/feed_parser.hpp"

#include <fstream>
#include <regex>
#include <stdexcept>
#include <utility>

#include "cwe_analyzer/errors.hpp"
#include "cwe_analyzer/gzip_stream.hpp"

namespace cwe_analyzer {

namespace {

using json = nlohmann::json;

// Rebuilds one captured subtree from SAX events.
class SubtreeBuilder {
 public:
  // Each returns true once the subtree is complete.
  bool scalar(json value) {
    place(std::move(value));
    return stack_.empty();
  }
  void open(json container) { stack_.push_back(place(std::move(container))); }
  bool close() {
    stack_.pop_back();
    return stack_.empty();
  }
  void key(std::string k) { key_ = std::move(k); }

  json take() {
    json out = std::move(root_);
    root_ = json();
    return out;
  }

 private:
  json* place(json value) {
    if (stack_.empty()) {
      root_ = std::move(value);
      return &root_;
    }
    json& top = *stack_.back();
    if (top.is_array()) {
      top.push_back(std::move(value));
      return &top.back();
    }
    json& slot = top[key_];
    slot = std::move(value);
    return &slot;
  }

  json root_;
  std::vector<json*> stack_;
  std::string key_;
};

enum class Role { Root, Items, Item, Cve, Skip };

struct PendingItem {
  std::size_t offset = 0;
  json meta;
  json problemtype;
};

class FeedSaxHandler {
 public:
  FeedSaxHandler(int feed_year, const FeedStreamBuf& buf, const RecordSink& sink, FeedSummary& summary)
      : year_(feed_year), buf_(buf), sink_(sink), summary_(summary) {}

  bool null() { return on_scalar(json(nullptr)); }
  bool boolean(bool v) { return on_scalar(json(v)); }
  bool number_integer(json::number_integer_t v) { return on_scalar(json(v)); }
  bool number_unsigned(json::number_unsigned_t v) { return on_scalar(json(v)); }
  bool number_float(json::number_float_t v, const std::string&) { return on_scalar(json(v)); }
  bool string(json::string_t& v) { return on_scalar(json(std::move(v))); }
  bool binary(json::binary_t&) { return on_scalar(json()); }

  bool start_object(std::size_t) { return on_open(json::object()); }
  bool start_array(std::size_t) { return on_open(json::array()); }
  bool end_object() { return on_close(); }
  bool end_array() { return on_close(); }

  bool key(json::string_t& k) {
    if (capture_ != Slot::None) {
      builder_.key(std::move(k));
    } else {
      frames_.back().key = std::move(k);
    }
    return true;
  }

  bool parse_error(std::size_t position, const std::string& last_token, const nlohmann::detail::exception& ex) {
    throw MalformedFeed(position, "not a JSON document near '" + last_token + "' (" + ex.what() + ")");
  }

  void finish() {
    if (!saw_items_) throw MalformedFeed(buf_.bytes_consumed(), "no CVE_Items array in feed");
  }

 private:
  struct Frame {
    Role role;
    std::string key;
  };

  enum class Slot { None, Meta, Problemtype };

  // Where a value opening in the current context goes.
  Slot capture_slot() const {
    if (frames_.empty() || frames_.back().role != Role::Cve) return Slot::None;
    const auto& k = frames_.back().key;
    if (k == "CVE_data_meta") return Slot::Meta;
    if (k == "problemtype") return Slot::Problemtype;
    return Slot::None;
  }

  bool on_scalar(json value) {
    if (capture_ != Slot::None) {
      if (builder_.scalar(std::move(value))) store_capture();
      return true;
    }
    if (frames_.empty()) throw MalformedFeed(buf_.bytes_consumed(), "top-level value is not an object");
    const Frame& top = frames_.back();
    if (top.role == Role::Root && top.key == "CVE_Items") {
      throw MalformedFeed(buf_.bytes_consumed(), "CVE_Items is not an array");
    }
    if (top.role == Role::Items) {
      warn_offset(buf_.bytes_consumed(), "CVE_Items element is not an object; skipped");
      return true;
    }
    if (const auto slot = capture_slot(); slot != Slot::None) {
      capture_ = slot;
      builder_.scalar(std::move(value));
      store_capture();
    }
    return true;
  }

  bool on_open(json container) {
    if (capture_ != Slot::None) {
      builder_.open(std::move(container));
      return true;
    }
    const bool is_object = container.is_object();
    if (frames_.empty()) {
      if (!is_object) throw MalformedFeed(buf_.bytes_consumed(), "top-level value is not an object");
      frames_.push_back({Role::Root, {}});
      return true;
    }
    const Frame& top = frames_.back();
    switch (top.role) {
      case Role::Root:
        if (top.key == "CVE_Items") {
          if (is_object) throw MalformedFeed(buf_.bytes_consumed(), "CVE_Items is not an array");
          saw_items_ = true;
          frames_.push_back({Role::Items, {}});
          return true;
        }
        break;
      case Role::Items:
        item_ = PendingItem{};
        item_.offset = buf_.bytes_consumed();
        if (is_object) {
          frames_.push_back({Role::Item, {}});
        } else {
          frames_.push_back({Role::Skip, {}});
          skipped_item_depth_ = frames_.size();
        }
        return true;
      case Role::Item:
        if (is_object && top.key == "cve") {
          frames_.push_back({Role::Cve, {}});
          return true;
        }
        break;
      case Role::Cve:
        if (const auto slot = capture_slot(); slot != Slot::None) {
          capture_ = slot;
          builder_.open(std::move(container));
          return true;
        }
        break;
      case Role::Skip:
        break;
    }
    frames_.push_back({Role::Skip, {}});
    return true;
  }

  bool on_close() {
    if (capture_ != Slot::None) {
      if (builder_.close()) store_capture();
      return true;
    }
    const Role role = frames_.back().role;
    const std::size_t depth = frames_.size();
    frames_.pop_back();
    if (role == Role::Item) {
      finish_item();
    } else if (role == Role::Skip && depth == skipped_item_depth_) {
      skipped_item_depth_ = 0;
      warn_offset(item_.offset, "CVE_Items element is not an object; skipped");
    }
    return true;
  }

  void store_capture() {
    (capture_ == Slot::Meta ? item_.meta : item_.problemtype) = builder_.take();
    capture_ = Slot::None;
  }

  void finish_item() {
    const json* id = nullptr;
    if (item_.meta.is_object()) {
      if (auto it = item_.meta.find("ID"); it != item_.meta.end() && it->is_string()) id = &*it;
    }
    if (id == nullptr) {
      warn_offset(item_.offset, "item lacks CVE_data_meta.ID; skipped");
      return;
    }
    const auto& cve_id = id->get_ref<const std::string&>();
    if (!is_valid_cve_id(cve_id)) {
      warn_offset(item_.offset, "item has malformed CVE id '" + cve_id + "'; skipped");
      return;
    }

    std::vector<std::string> notes;
    auto tokens = extract_cwes(item_.problemtype, &notes);
    for (auto& note : notes) warn(cve_id, std::move(note));

    CveRecord record(cve_id, year_, std::move(tokens));
    auto& stats = summary_.stats;
    for (const auto& token : record.cwes()) {
      if (token.kind() == CweKind::Unrecognized) {
        ++stats.unrecognized_tokens;
        warn(record.cve_id(), "unrecognized problemtype token '" + token.raw() + "'");
      }
    }
    ++stats.records_parsed;
    if (record.cwes().empty()) ++stats.records_with_no_cwe;
    stats.assignments_extracted += record.cwes().size();
    item_ = PendingItem{};
    sink_(std::move(record));
  }

  void warn(std::string locator, std::string message) {
    summary_.diagnostics.push_back(Diagnostic{year_, std::move(locator), std::move(message)});
  }
  void warn_offset(std::size_t offset, std::string message) { warn(std::to_string(offset), std::move(message)); }

  int year_;
  const FeedStreamBuf& buf_;
  const RecordSink& sink_;
  FeedSummary& summary_;

  std::vector<Frame> frames_;
  bool saw_items_ = false;
  std::size_t skipped_item_depth_ = 0;
  PendingItem item_;
  Slot capture_ = Slot::None;
  SubtreeBuilder builder_;
};

const std::regex& feed_name_pattern() {
  static const std::regex pattern(R"(^nvdcve-1\.1-([0-9]{4})\.json(\.gz)?$)");
  return pattern;
}

}  // namespace

std::string Diagnostic::format() const {
  return "WARN " + std::to_string(feed_year) + " " + locator + " " + message;
}

FeedSummary stream_feed(std::istream& source, int feed_year, const RecordSink& sink) {
  FeedStreamBuf buf(source, /*hash=*/true);
  FeedSummary summary;
  summary.stats.feed_year = feed_year;

  FeedSaxHandler handler(feed_year, buf, sink, summary);
  std::istream decoded(&buf);
  json::sax_parse(decoded, &handler, json::input_format_t::json, /*strict=*/true);
  handler.finish();

  summary.stats.bytes_consumed = buf.bytes_consumed();
  summary.content_sha256 = buf.sha256_hex();
  summary.compressed = buf.compressed();
  return summary;
}

FeedResult parse_feed(std::istream& source, int feed_year) {
  FeedResult result;
  auto summary = stream_feed(source, feed_year, [&](CveRecord&& r) { result.records.push_back(std::move(r)); });
  result.stats = summary.stats;
  result.diagnostics = std::move(summary.diagnostics);
  result.content_sha256 = std::move(summary.content_sha256);
  return result;
}

std::optional<int> feed_year_from_filename(const std::filesystem::path& path) {
  const auto name = path.filename().string();
  std::smatch m;
  if (!std::regex_match(name, m, feed_name_pattern())) return std::nullopt;
  return std::stoi(m[1].str());
}

int resolve_feed_year(const std::filesystem::path& path, std::optional<int> year_override) {
  if (year_override) return *year_override;
  if (auto year = feed_year_from_filename(path)) return *year;
  throw YearUndeterminable("cannot infer feed year from '" + path.filename().string() +
                           "' (expected nvdcve-1.1-<YYYY>.json[.gz])");
}

FeedSummary stream_feed_file(const std::filesystem::path& path, const RecordSink& sink,
                             std::optional<int> year_override) {
  const int year = resolve_feed_year(path, year_override);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable("cannot open " + path.string());
  return stream_feed(in, year, sink);
}

FeedResult parse_feed_file(const std::filesystem::path& path, std::optional<int> year_override) {
  const int year = resolve_feed_year(path, year_override);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable("cannot open " + path.string());
  return parse_feed(in, year);
}

std::vector<CweId> extract_cwes(const nlohmann::json& problemtype, std::vector<std::string>* notes) {
  std::vector<CweId> out;
  auto note = [&](std::string text) {
    if (notes) notes->push_back(std::move(text));
  };

  if (problemtype.is_null()) return out;
  if (!problemtype.is_object()) {
    note("problemtype is not an object");
    return out;
  }
  const auto data = problemtype.find("problemtype_data");
  if (data == problemtype.end()) return out;
  if (!data->is_array()) {
    note("problemtype_data is not an array");
    return out;
  }
  for (const auto& entry : *data) {
    if (!entry.is_object()) {
      note("problemtype_data entry is not an object");
      continue;
    }
    const auto descriptions = entry.find("description");
    if (descriptions == entry.end()) continue;
    if (!descriptions->is_array()) {
      note("description is not an array");
      continue;
    }
    for (const auto& description : *descriptions) {
      const auto value = description.is_object() ? description.find("value") : description.end();
      if (!description.is_object() || value == description.end() || !value->is_string()) {
        note("description entry has no string value");
        continue;
      }
      out.push_back(CweId::parse(value->get_ref<const std::string&>()));
    }
  }
  return out;
}

}  // namespace cwe_analyzer
