#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "socnet/csv.hpp"
#include "socnet/graph.hpp"

namespace socnet {

struct Post {
    std::string post_id;
    EntityId author;
    Timestamp timestamp = 0;
    std::string title;
    std::string body;
    std::set<std::string> tags;
};

struct Comment {
    std::string comment_id;
    std::string post_id;
    EntityId author;
    Timestamp timestamp = 0;
    std::string body;
};

struct BlogDump {
    std::vector<Post> posts;
    std::vector<Comment> comments;
    std::size_t rejected = 0;
    std::size_t dangling_comments = 0;
    std::vector<csv::Diagnostic> diagnostics;
};

// Posts: post_id,author,timestamp,title,body,tags (tags separated by ';').
// Comments: comment_id,post_id,author,timestamp,body.
// Either file may instead be JSON lines with the same keys (tags as an array).
BlogDump parse_blog_dump(std::istream& posts, std::istream& comments);
BlogDump parse_blog_dump(const std::filesystem::path& posts, const std::filesystem::path& comments);

// One Comment interaction per comment on a known post: commenter -> post author.
std::vector<Interaction> derive_interactions(const std::vector<Post>& posts, const std::vector<Comment>& comments);

// m1^2 / max(m2, 1).
double m3(double degree_in, double degree_out);

struct TokenizerOptions {
    std::size_t min_length = 2;  // code points
    std::set<std::string> stopwords;
};

// Lowercases ASCII, splits on ASCII non-alphanumerics (multi-byte UTF-8 stays
// inside tokens) and drops short tokens and stopwords.
std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options = {});

struct DocVector {
    std::string doc_id;
    std::map<std::string, double> weights;  // only non-zero weights
    double norm = 0.0;
};

struct ScoredDocument {
    std::string doc_id;
    double similarity = 0.0;
};

class TfIdfIndex {
public:
    TfIdfIndex() = default;

    // weight(t, d) = count(t, d) * ln(N / df(t)).
    static TfIdfIndex build(const std::vector<std::pair<std::string, std::string>>& documents,
                            const TokenizerOptions& options = {});

    std::size_t size() const noexcept { return docs_.size(); }
    const std::vector<DocVector>& documents() const noexcept { return docs_; }
    const DocVector& at(std::string_view doc_id) const;
    double idf(const std::string& term) const;

    // Top k by cosine similarity, excluding the query; ties by doc_id.
    std::vector<ScoredDocument> similar(std::string_view query_doc_id, std::size_t k) const;

    nlohmann::json to_json() const;
    static TfIdfIndex from_json(const nlohmann::json& j);

private:
    std::vector<DocVector> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<std::string, std::size_t> df_;
    std::size_t corpus_size_ = 0;

    void reindex();
};

double cosine_similarity(const DocVector& a, const DocVector& b);

std::vector<std::pair<std::string, std::string>> blog_documents(const BlogDump& dump);

// One aggregated document per author (posts, tags and comments).
std::map<EntityId, std::vector<std::string>> author_documents(const BlogDump& dump);

}  // namespace socnet
