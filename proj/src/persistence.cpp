#include "elearn/persistence.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include <unistd.h>

#include "elearn/error.hpp"

namespace elearn {

namespace {

constexpr std::string_view kSnapshotMagic = "elearn-snapshot 1";

void sync_file(std::FILE* f, bool durable) {
  if (std::fflush(f) != 0) fail(ErrorCode::IoError, "fflush");
  if (durable && ::fsync(::fileno(f)) != 0) fail(ErrorCode::IoError, "fsync");
}

std::string encode_put(const std::string& key, const Json& record) {
  Json line = {{"k", key}, {"v", record}};
  return line.dump();
}

std::string encode_erase(const std::string& key) {
  Json line = {{"k", key}, {"del", true}};
  return line.dump();
}

struct DecodedLine {
  std::string key;
  std::optional<Json> record;  // empty for a tombstone
};

std::optional<DecodedLine> decode_line(const std::string& text) {
  Json line = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!line.is_object()) return std::nullopt;
  auto key = line.find("k");
  if (key == line.end() || !key->is_string() || key->get_ref<const std::string&>().empty()) {
    return std::nullopt;
  }
  DecodedLine out{key->get<std::string>(), std::nullopt};
  if (auto v = line.find("v"); v != line.end()) {
    out.record = *v;
  } else if (auto del = line.find("del"); del == line.end() || *del != true) {
    return std::nullopt;
  }
  return out;
}

}  // namespace

RecordStore::RecordStore(std::string name,
                         std::optional<std::filesystem::path> file,
                         bool sync_writes)
    : name_(std::move(name)), file_(std::move(file)), sync_writes_(sync_writes) {
  if (!file_) return;
  replay();
  compact();
  out_.reset(std::fopen(file_->c_str(), "ab"));
  if (!out_) fail(ErrorCode::IoError, file_->string(), "cannot open " + file_->string());
}

RecordStore::~RecordStore() {
  if (out_) std::fflush(out_.get());
}

void RecordStore::replay() {
  std::ifstream in(*file_);
  if (!in) return;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    auto decoded = decode_line(text);
    if (!decoded) {
      fail(ErrorCode::CorruptRecord,
           name_ + ".db:" + std::to_string(line_no),
           "corrupt record in " + name_ + ".db at line " + std::to_string(line_no));
    }
    if (decoded->record) {
      apply_put(decoded->key, std::move(*decoded->record));
    } else {
      apply_erase(decoded->key);
    }
  }
}

void RecordStore::compact() {
  auto tmp = *file_;
  tmp += ".compact";
  {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(tmp.c_str(), "wb"));
    if (!f) fail(ErrorCode::IoError, tmp.string(), "cannot open " + tmp.string());
    for (const auto& key : order_) {
      auto line = encode_put(key, records_.at(key));
      line.push_back('\n');
      if (std::fwrite(line.data(), 1, line.size(), f.get()) != line.size()) {
        fail(ErrorCode::IoError, tmp.string());
      }
    }
    sync_file(f.get(), sync_writes_);
  }
  std::filesystem::rename(tmp, *file_);
}

void RecordStore::append_line(const std::string& line) {
  if (!out_) return;
  std::string buf = line;
  buf.push_back('\n');
  if (std::fwrite(buf.data(), 1, buf.size(), out_.get()) != buf.size()) {
    fail(ErrorCode::IoError, file_->string());
  }
  sync_file(out_.get(), sync_writes_);
}

void RecordStore::apply_put(const std::string& key, Json record) {
  auto [it, inserted] = records_.insert_or_assign(key, std::move(record));
  if (inserted) order_.push_back(key);
}

void RecordStore::apply_erase(const std::string& key) {
  if (records_.erase(key) == 0) return;
  order_.erase(std::find(order_.begin(), order_.end(), key));
}

void RecordStore::put(const std::string& key, const Json& record) {
  if (key.empty()) fail(ErrorCode::ValidationError, "key");
  std::unique_lock lock(mutex_);
  append_line(encode_put(key, record));
  apply_put(key, record);
}

Json RecordStore::get(const std::string& key) const {
  auto found = find(key);
  if (!found) fail(ErrorCode::NotFound, name_ + "/" + key);
  return std::move(*found);
}

std::optional<Json> RecordStore::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

bool RecordStore::contains(const std::string& key) const {
  std::shared_lock lock(mutex_);
  return records_.count(key) != 0;
}

bool RecordStore::erase(const std::string& key) {
  std::unique_lock lock(mutex_);
  if (records_.count(key) == 0) return false;
  append_line(encode_erase(key));
  apply_erase(key);
  return true;
}

std::vector<Json> RecordStore::scan() const {
  std::shared_lock lock(mutex_);
  std::vector<Json> out;
  out.reserve(order_.size());
  for (const auto& key : order_) out.push_back(records_.at(key));
  return out;
}

std::vector<std::pair<std::string, Json>> RecordStore::entries() const {
  std::shared_lock lock(mutex_);
  std::vector<std::pair<std::string, Json>> out;
  out.reserve(order_.size());
  for (const auto& key : order_) out.emplace_back(key, records_.at(key));
  return out;
}

std::size_t RecordStore::size() const {
  std::shared_lock lock(mutex_);
  return order_.size();
}

std::vector<std::string> RecordStore::encoded_lines() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(order_.size());
  for (const auto& key : order_) out.push_back(encode_put(key, records_.at(key)));
  return out;
}

void RecordStore::load_encoded_lines(const std::vector<std::string>& lines) {
  std::vector<DecodedLine> decoded;
  decoded.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto d = decode_line(lines[i]);
    if (!d || !d->record) {
      fail(ErrorCode::CorruptSnapshot, name_,
           "corrupt snapshot record " + std::to_string(i + 1) + " in store " + name_);
    }
    decoded.push_back(std::move(*d));
  }
  std::unique_lock lock(mutex_);
  if (!order_.empty()) fail(ErrorCode::NonEmptyTarget, name_);
  for (auto& d : decoded) {
    append_line(encode_put(d.key, *d.record));
    apply_put(d.key, std::move(*d.record));
  }
}

void RecordStore::flush() {
  std::unique_lock lock(mutex_);
  if (out_) sync_file(out_.get(), true);
}

std::string_view store_name(StoreId id) noexcept {
  switch (id) {
    case StoreId::Personal: return "personal";
    case StoreId::Cultural: return "cultural";
    case StoreId::Feedback: return "feedback";
    case StoreId::Scores: return "scores";
    case StoreId::Placements: return "placements";
    case StoreId::Enrollments: return "enrollments";
    case StoreId::Questions: return "questions";
    case StoreId::Sessions: return "sessions";
    case StoreId::Cases: return "cases";
  }
  return "unknown";
}

RepositorySet::RepositorySet(std::optional<std::filesystem::path> data_dir,
                             bool sync_writes)
    : data_dir_(std::move(data_dir)) {
  if (data_dir_) std::filesystem::create_directories(*data_dir_);
  for (StoreId id : kAllStores) {
    std::string name(store_name(id));
    std::optional<std::filesystem::path> file;
    if (data_dir_) file = *data_dir_ / (name + ".db");
    stores_[index(id)] = std::make_unique<RecordStore>(name, std::move(file), sync_writes);
  }
}

bool RepositorySet::all_empty() const {
  return std::all_of(stores_.begin(), stores_.end(),
                     [](const auto& s) { return s->empty(); });
}

void RepositorySet::flush() {
  for (auto& s : stores_) s->flush();
}

void RepositorySet::export_snapshot(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, path.string(), "cannot write " + path.string());
  out << kSnapshotMagic << '\n';
  for (StoreId id : kAllStores) {
    auto lines = store(id).encoded_lines();
    out << "store " << store_name(id) << ' ' << lines.size() << '\n';
    for (const auto& line : lines) out << line << '\n';
  }
  out << "end\n";
  out.flush();
  if (!out) fail(ErrorCode::IoError, path.string(), "cannot write " + path.string());
}

void RepositorySet::import_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::NotFound, path.string(), "cannot read " + path.string());

  std::string line;
  if (!std::getline(in, line) || line != kSnapshotMagic) {
    fail(ErrorCode::CorruptSnapshot, "header", "snapshot header missing");
  }

  std::array<std::vector<std::string>, kAllStores.size()> contents;
  for (StoreId id : kAllStores) {
    std::string name(store_name(id));
    auto truncated = [&] {
      fail(ErrorCode::CorruptSnapshot, name, "snapshot truncated in store " + name);
    };
    if (!std::getline(in, line)) truncated();
    std::istringstream header(line);
    std::string tag, header_name;
    long long count = -1;
    if (!(header >> tag >> header_name >> count) || tag != "store" ||
        header_name != name || count < 0) {
      truncated();
    }
    auto& lines = contents[index(id)];
    lines.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
      if (!std::getline(in, line)) truncated();
      lines.push_back(line);
    }
  }
  if (!std::getline(in, line) || line != "end") {
    fail(ErrorCode::CorruptSnapshot, "end", "snapshot trailer missing");
  }

  if (!all_empty()) {
    for (StoreId id : kAllStores) {
      if (!store(id).empty()) fail(ErrorCode::NonEmptyTarget, std::string(store_name(id)));
    }
  }
  for (StoreId id : kAllStores) store(id).load_encoded_lines(contents[index(id)]);
}

}  // namespace elearn
