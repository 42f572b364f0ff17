#include "coevo/vcs/replay.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "coevo/error.hpp"
#include "coevo/vcs/process.hpp"

namespace coevo::vcs {

namespace {

constexpr std::string_view kNullSha = "0000000000000000000000000000000000000000";

std::vector<std::string> git_args(const std::filesystem::path& repo, std::initializer_list<std::string> rest) {
    std::vector<std::string> args{"git", "-C", repo.string(), "-c", "core.quotepath=off"};
    args.insert(args.end(), rest.begin(), rest.end());
    return args;
}

std::string git_checked(const std::filesystem::path& repo, std::initializer_list<std::string> rest) {
    auto args = git_args(repo, rest);
    auto result = run_process(args);
    if (result.exit_code != 0) {
        std::string cmd;
        for (std::size_t i = 5; i < args.size(); ++i) cmd += (cmd.empty() ? "" : " ") + args[i];
        throw Error("git " + cmd + " failed in " + repo.string());
    }
    return std::move(result.out);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string read_blob(const std::filesystem::path& repo, const std::string& sha) {
    return git_checked(repo, {"cat-file", "blob", sha});
}

struct RawEntry {
    std::string old_sha;
    std::string new_sha;
    char status = 'M';
    std::string path;
};

// Parses `git diff-tree -r -z --raw` output.
std::vector<RawEntry> parse_raw_diff(std::string_view out) {
    std::vector<RawEntry> entries;
    std::size_t pos = 0;
    while (pos < out.size()) {
        auto meta_end = out.find('\0', pos);
        if (meta_end == std::string_view::npos) break;
        std::string_view meta = out.substr(pos, meta_end - pos);
        pos = meta_end + 1;
        auto path_end = out.find('\0', pos);
        if (path_end == std::string_view::npos) path_end = out.size();
        std::string_view path = out.substr(pos, path_end - pos);
        pos = path_end + 1;
        if (meta.empty() || meta[0] != ':') continue;
        auto fields = split(meta.substr(1), ' ');
        if (fields.size() < 5) continue;
        // Submodule entries carry mode 160000 and have no blob.
        if (fields[0] == "160000" || fields[1] == "160000") continue;
        entries.push_back(RawEntry{std::string(fields[2]), std::string(fields[3]),
                                   fields[4].empty() ? 'M' : fields[4][0], std::string(path)});
    }
    return entries;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

bool is_java_path(std::string_view path) {
    return path.size() > 5 && path.substr(path.size() - 5) == ".java";
}

std::string normalize_author(std::string_view name, std::string_view email) {
    return lowercase(name) + " <" + lowercase(email) + ">";
}

History enumerate_commits(const std::filesystem::path& repo, const HistoryOptions& options) {
    std::error_code ec;
    if (!std::filesystem::is_directory(repo, ec)) {
        throw Error("not a readable repository: " + repo.string());
    }
    if (run_process(git_args(repo, {"rev-parse", "--git-dir"})).exit_code != 0) {
        throw Error("not a readable repository: " + repo.string());
    }
    History history;
    if (run_process(git_args(repo, {"rev-parse", "--verify", "-q", "HEAD"})).exit_code != 0) {
        return history;  // unborn HEAD: no commits yet
    }

    std::string log = git_checked(
        repo, {"log", "--first-parent", "--reverse", "-z", "--format=%H%x1f%P%x1f%an%x1f%ae%x1f%ct%x1f%B"});

    for (auto entry : split(log, '\0')) {
        if (entry.empty()) continue;
        if (entry.front() == '\n') entry.remove_prefix(1);
        auto fields = split(entry, '\x1f');
        if (fields.size() != 6 || fields[0].empty()) {
            history.diagnostics.push_back("skipped commit with unparsable metadata: " +
                                          std::string(entry.substr(0, 40)));
            continue;
        }
        CommitRecord record;
        record.commit_id = std::string(fields[0]);
        std::int64_t ts = 0;
        auto [ptr, err] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), ts);
        if (err != std::errc{} || ptr != fields[4].data() + fields[4].size()) {
            history.diagnostics.push_back("skipped commit " + record.commit_id + ": bad timestamp");
            continue;
        }
        record.timestamp = ts;
        if (options.since && ts < *options.since) continue;
        record.author_id = normalize_author(fields[2], fields[3]);
        std::string message(fields[5]);
        while (!message.empty() && (message.back() == '\n' || message.back() == '\r')) message.pop_back();
        record.message = std::move(message);

        auto parents = split(fields[1], ' ');
        std::string diff;
        if (parents.empty() || parents[0].empty()) {
            diff = git_checked(repo, {"diff-tree", "--root", "-r", "-z", "--no-renames", "--no-commit-id", "--raw",
                                      record.commit_id});
        } else {
            diff = git_checked(repo, {"diff-tree", "-r", "-z", "--no-renames", "--no-commit-id", "--raw",
                                      std::string(parents[0]), record.commit_id});
        }
        for (const auto& e : parse_raw_diff(diff)) {
            if (!is_java_path(e.path)) continue;
            FileDelta delta;
            delta.path = e.path;
            if (e.status != 'A' && e.old_sha != kNullSha) delta.before_source = read_blob(repo, e.old_sha);
            if (e.status != 'D' && e.new_sha != kNullSha) delta.after_source = read_blob(repo, e.new_sha);
            if (!delta.before_source && !delta.after_source) continue;
            record.file_deltas.push_back(std::move(delta));
        }
        if (record.file_deltas.empty()) continue;
        history.commits.push_back(std::move(record));
    }
    return history;
}

std::map<std::string, std::string> head_sources(const std::filesystem::path& repo) {
    std::map<std::string, std::string> out;
    if (run_process(git_args(repo, {"rev-parse", "--verify", "-q", "HEAD"})).exit_code != 0) return out;
    std::string listing = git_checked(repo, {"ls-tree", "-r", "-z", "HEAD"});
    for (auto entry : split(listing, '\0')) {
        auto tab = entry.find('\t');
        if (tab == std::string_view::npos) continue;
        auto meta = split(entry.substr(0, tab), ' ');
        std::string path(entry.substr(tab + 1));
        if (meta.size() < 3 || meta[1] != "blob" || !is_java_path(path)) continue;
        out.emplace(std::move(path), read_blob(repo, std::string(meta[2])));
    }
    return out;
}

ProjectStats compute_project_stats(std::span<const CommitRecord> commits, std::span<const std::string> head_texts) {
    if (commits.empty()) throw InvalidInput("no history");
    ProjectStats stats;
    for (const auto& text : head_texts) {
        stats.loc += static_cast<std::int64_t>(std::count(text.begin(), text.end(), '\n'));
        if (!text.empty() && text.back() != '\n') ++stats.loc;
    }
    std::set<std::string> authors;
    std::int64_t first = commits.front().timestamp;
    std::int64_t last = commits.front().timestamp;
    for (const auto& c : commits) {
        authors.insert(c.author_id);
        first = std::min(first, c.timestamp);
        last = std::max(last, c.timestamp);
    }
    stats.developers = static_cast<std::int64_t>(authors.size());
    stats.age_days = (last - first) / 86400;
    stats.java_commit_count = static_cast<std::int64_t>(commits.size());
    return stats;
}

std::map<std::string, std::string> replay(std::span<const CommitRecord> commits) {
    std::map<std::string, std::string> tree;
    for (const auto& commit : commits) {
        for (const auto& delta : commit.file_deltas) {
            if (delta.after_source) {
                tree[delta.path] = *delta.after_source;
            } else {
                tree.erase(delta.path);
            }
        }
    }
    return tree;
}

}  // namespace coevo::vcs
