#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace elearn {

using Json = nlohmann::json;

/// A keyed record store backed by one append-only line file.
///
/// Each line is a compact JSON object `{"k": key, "v": record}`; an erase
/// appends a tombstone `{"k": key, "del": true}`. On open the log is replayed
/// with last-write-wins and compacted back to one line per live key. Scans
/// return records in the order their key was first inserted.
///
/// Without a backing file the store is purely in memory.
class RecordStore {
 public:
  RecordStore(std::string name, std::optional<std::filesystem::path> file,
              bool sync_writes = true);
  ~RecordStore();

  RecordStore(const RecordStore&) = delete;
  RecordStore& operator=(const RecordStore&) = delete;

  const std::string& name() const noexcept { return name_; }
  const std::optional<std::filesystem::path>& file() const noexcept {
    return file_;
  }

  void put(const std::string& key, const Json& record);
  Json get(const std::string& key) const;
  std::optional<Json> find(const std::string& key) const;
  bool contains(const std::string& key) const;
  bool erase(const std::string& key);

  std::vector<Json> scan() const;
  std::vector<std::pair<std::string, Json>> entries() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  // Raw log lines for the live records, in scan order.
  std::vector<std::string> encoded_lines() const;
  // Bulk load of raw lines into an empty store; used by snapshot import.
  void load_encoded_lines(const std::vector<std::string>& lines);

  void flush();

 private:
  struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
      if (f != nullptr) std::fclose(f);
    }
  };

  void replay();
  void compact();
  void append_line(const std::string& line);
  void apply_put(const std::string& key, Json record);
  void apply_erase(const std::string& key);

  std::string name_;
  std::optional<std::filesystem::path> file_;
  bool sync_writes_;
  std::unique_ptr<std::FILE, FileCloser> out_;

  mutable std::shared_mutex mutex_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Json> records_;
};

enum class StoreId {
  Personal,
  Cultural,
  Feedback,
  Scores,
  Placements,
  Enrollments,
  Questions,
  Sessions,
  Cases,
};

inline constexpr std::array<StoreId, 9> kAllStores = {
    StoreId::Personal,    StoreId::Cultural,  StoreId::Feedback,
    StoreId::Scores,      StoreId::Placements, StoreId::Enrollments,
    StoreId::Questions,   StoreId::Sessions,  StoreId::Cases,
};

std::string_view store_name(StoreId id) noexcept;

/// The nine repositories. With a data directory each store lives in
/// `<dir>/<name>.db`; without one everything stays in memory.
class RepositorySet {
 public:
  explicit RepositorySet(std::optional<std::filesystem::path> data_dir = {},
                         bool sync_writes = true);

  RecordStore& store(StoreId id) { return *stores_[index(id)]; }
  const RecordStore& store(StoreId id) const { return *stores_[index(id)]; }

  RecordStore& personal() { return store(StoreId::Personal); }
  const RecordStore& personal() const { return store(StoreId::Personal); }
  RecordStore& cultural() { return store(StoreId::Cultural); }
  const RecordStore& cultural() const { return store(StoreId::Cultural); }
  RecordStore& feedback() { return store(StoreId::Feedback); }
  const RecordStore& feedback() const { return store(StoreId::Feedback); }
  RecordStore& scores() { return store(StoreId::Scores); }
  const RecordStore& scores() const { return store(StoreId::Scores); }
  RecordStore& placements() { return store(StoreId::Placements); }
  const RecordStore& placements() const { return store(StoreId::Placements); }
  RecordStore& enrollments() { return store(StoreId::Enrollments); }
  const RecordStore& enrollments() const { return store(StoreId::Enrollments); }
  RecordStore& questions() { return store(StoreId::Questions); }
  const RecordStore& questions() const { return store(StoreId::Questions); }
  RecordStore& sessions() { return store(StoreId::Sessions); }
  const RecordStore& sessions() const { return store(StoreId::Sessions); }
  RecordStore& cases() { return store(StoreId::Cases); }
  const RecordStore& cases() const { return store(StoreId::Cases); }

  const std::optional<std::filesystem::path>& data_dir() const noexcept {
    return data_dir_;
  }

  bool all_empty() const;
  void flush();

  /// Writes all nine stores into a single text archive.
  void export_snapshot(const std::filesystem::path& path) const;
  /// Loads an archive produced by export_snapshot. Every store must be empty.
  void import_snapshot(const std::filesystem::path& path);

 private:
  static std::size_t index(StoreId id) { return static_cast<std::size_t>(id); }

  std::optional<std::filesystem::path> data_dir_;
  std::array<std::unique_ptr<RecordStore>, kAllStores.size()> stores_;
};

}  // namespace elearn
