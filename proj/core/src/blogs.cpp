#include "socnet/blogs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_set>

namespace socnet {

namespace {

bool looks_like_json_lines(std::istream& in) {
    while (true) {
        const int c = in.peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            in.get();
            continue;
        }
        return c == '{';
    }
}

Timestamp json_timestamp(const nlohmann::json& v, csv::TimestampParser& parse) {
    if (v.is_number_integer()) return v.get<Timestamp>();
    return parse(v.get<std::string>());
}

std::set<std::string> split_tags(std::string_view text) {
    std::set<std::string> tags;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find_first_of(";|", start);
        if (end == std::string_view::npos) end = text.size();
        auto tag = text.substr(start, end - start);
        while (!tag.empty() && tag.front() == ' ') tag.remove_prefix(1);
        while (!tag.empty() && tag.back() == ' ') tag.remove_suffix(1);
        if (!tag.empty()) tags.emplace(tag);
        start = end + 1;
    }
    return tags;
}

template <typename Row>
void read_rows(std::istream& in, const std::vector<std::string>& required, BlogDump& dump, Row&& on_row) {
    // on_row(field getter, timestamp parser) for CSV and JSON lines alike.
    csv::TimestampParser parse_ts;
    if (looks_like_json_lines(in)) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                const auto j = nlohmann::json::parse(line);
                for (const auto& key : required) {
                    if (!j.contains(key)) throw ValidationError("missing key '" + key + "'");
                }
                on_row(
                    [&](const std::string& key) -> std::string {
                        if (!j.contains(key) || j[key].is_null()) return {};
                        if (j[key].is_string()) return j[key].get<std::string>();
                        if (j[key].is_array()) {
                            std::string joined;
                            for (const auto& t : j[key]) joined += t.get<std::string>() + ";";
                            return joined;
                        }
                        return j[key].dump();
                    },
                    [&](const std::string& key) { return json_timestamp(j.at(key), parse_ts); });
            } catch (const std::exception& e) {
                ++dump.rejected;
                dump.diagnostics.push_back({lineno, e.what()});
            }
        }
        return;
    }
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) return;
    const csv::Header header(row);
    std::map<std::string, std::size_t> cols;
    for (const auto& key : required) cols[key] = header.require(key);
    if (auto tags = header.find("tags")) cols["tags"] = *tags;
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        try {
            if (row.size() != header.columns().size()) {
                throw ValidationError("expected " + std::to_string(header.columns().size()) + " fields, got " +
                                      std::to_string(row.size()));
            }
            on_row(
                [&](const std::string& key) -> std::string {
                    auto it = cols.find(key);
                    return it == cols.end() ? std::string() : row[it->second];
                },
                [&](const std::string& key) { return parse_ts(row[cols.at(key)]); });
        } catch (const ValidationError& e) {
            ++dump.rejected;
            dump.diagnostics.push_back({reader.line(), e.what()});
        }
    }
}

}  // namespace

BlogDump parse_blog_dump(std::istream& posts_in, std::istream& comments_in) {
    BlogDump dump;
    std::set<std::string> post_ids;
    read_rows(posts_in, {"post_id", "author", "timestamp", "title", "body"}, dump, [&](auto field, auto ts) {
        Post p;
        p.post_id = field("post_id");
        p.author = field("author");
        p.timestamp = ts("timestamp");
        p.title = field("title");
        p.body = field("body");
        p.tags = split_tags(field("tags"));
        if (p.post_id.empty()) throw ValidationError("empty post_id");
        if (p.author.empty()) throw ValidationError("empty author");
        if (!post_ids.insert(p.post_id).second) throw ValidationError("duplicate post_id '" + p.post_id + "'");
        dump.posts.push_back(std::move(p));
    });
    std::set<std::string> comment_ids;
    read_rows(comments_in, {"comment_id", "post_id", "author", "timestamp", "body"}, dump, [&](auto field, auto ts) {
        Comment c;
        c.comment_id = field("comment_id");
        c.post_id = field("post_id");
        c.author = field("author");
        c.timestamp = ts("timestamp");
        c.body = field("body");
        if (c.comment_id.empty()) throw ValidationError("empty comment_id");
        if (c.author.empty()) throw ValidationError("empty author");
        if (!comment_ids.insert(c.comment_id).second) {
            throw ValidationError("duplicate comment_id '" + c.comment_id + "'");
        }
        if (!post_ids.contains(c.post_id)) ++dump.dangling_comments;
        dump.comments.push_back(std::move(c));
    });
    return dump;
}

BlogDump parse_blog_dump(const std::filesystem::path& posts, const std::filesystem::path& comments) {
    std::ifstream p(posts, std::ios::binary);
    if (!p) throw RuntimeError("cannot open posts file " + posts.string());
    std::ifstream c(comments, std::ios::binary);
    if (!c) throw RuntimeError("cannot open comments file " + comments.string());
    return parse_blog_dump(p, c);
}

std::vector<Interaction> derive_interactions(const std::vector<Post>& posts, const std::vector<Comment>& comments) {
    std::unordered_map<std::string, const Post*> by_id;
    for (const auto& p : posts) by_id.emplace(p.post_id, &p);
    std::vector<Interaction> out;
    out.reserve(comments.size());
    for (const auto& c : comments) {
        auto it = by_id.find(c.post_id);
        if (it == by_id.end()) continue;
        Interaction r;
        r.src = c.author;
        r.dst = it->second->author;
        r.timestamp = c.timestamp;
        r.kind = InteractionKind::Comment;
        r.meta = {{"post_id", c.post_id}, {"comment_id", c.comment_id}};
        out.push_back(std::move(r));
    }
    return out;
}

double m3(double degree_in, double degree_out) {
    if (degree_in < 0.0 || degree_out < 0.0) throw ValidationError("m3 needs non-negative degrees");
    return degree_in * degree_in / std::max(degree_out, 1.0);
}

// ------------------------------------------------------------------ TF-IDF

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t code_points = 0;
    auto flush = [&] {
        if (code_points >= options.min_length && !options.stopwords.contains(current)) tokens.push_back(current);
        current.clear();
        code_points = 0;
    };
    for (unsigned char c : text) {
        if (c >= 0x80) {
            current.push_back(static_cast<char>(c));
            if ((c & 0xC0) != 0x80) ++code_points;  // lead byte
        } else if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
            ++code_points;
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

TfIdfIndex TfIdfIndex::build(const std::vector<std::pair<std::string, std::string>>& documents,
                             const TokenizerOptions& options) {
    if (documents.empty()) throw ValidationError("TF-IDF index needs at least one document");
    TfIdfIndex index;
    index.corpus_size_ = documents.size();
    std::vector<std::map<std::string, std::size_t>> counts;
    counts.reserve(documents.size());
    bool any_token = false;
    for (const auto& [id, text] : documents) {
        auto& tf = counts.emplace_back();
        for (auto& t : tokenize(text, options)) ++tf[std::move(t)];
        any_token = any_token || !tf.empty();
        for (const auto& [term, n] : tf) ++index.df_[term];
    }
    if (!any_token) throw ValidationError("TF-IDF corpus contains no tokens");
    const double n_docs = static_cast<double>(documents.size());
    for (std::size_t i = 0; i < documents.size(); ++i) {
        DocVector dv{documents[i].first, {}, 0.0};
        for (const auto& [term, n] : counts[i]) {
            const double w = static_cast<double>(n) * std::log(n_docs / static_cast<double>(index.df_[term]));
            if (w > 0.0) {
                dv.weights.emplace(term, w);
                dv.norm += w * w;
            }
        }
        dv.norm = std::sqrt(dv.norm);
        index.docs_.push_back(std::move(dv));
    }
    index.reindex();
    return index;
}

void TfIdfIndex::reindex() {
    by_id_.clear();
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        if (!by_id_.emplace(docs_[i].doc_id, i).second) {
            throw ValidationError("duplicate document id '" + docs_[i].doc_id + "'");
        }
    }
}

const DocVector& TfIdfIndex::at(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    if (it == by_id_.end()) throw NotFoundError("unknown document '" + std::string(doc_id) + "'");
    return docs_[it->second];
}

double TfIdfIndex::idf(const std::string& term) const {
    auto it = df_.find(term);
    if (it == df_.end()) return 0.0;
    return std::log(static_cast<double>(corpus_size_) / static_cast<double>(it->second));
}

double cosine_similarity(const DocVector& a, const DocVector& b) {
    if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
    const auto& small = a.weights.size() <= b.weights.size() ? a.weights : b.weights;
    const auto& large = a.weights.size() <= b.weights.size() ? b.weights : a.weights;
    double dot = 0.0;
    for (const auto& [term, w] : small) {
        auto it = large.find(term);
        if (it != large.end()) dot += w * it->second;
    }
    return std::clamp(dot / (a.norm * b.norm), 0.0, 1.0);
}

std::vector<ScoredDocument> TfIdfIndex::similar(std::string_view query_doc_id, std::size_t k) const {
    if (k == 0) throw ValidationError("k must be at least 1");
    const auto& query = at(query_doc_id);
    std::vector<ScoredDocument> scored;
    scored.reserve(docs_.size());
    for (const auto& d : docs_) {
        if (d.doc_id == query.doc_id) continue;
        scored.push_back({d.doc_id, cosine_similarity(query, d)});
    }
    auto better = [](const ScoredDocument& a, const ScoredDocument& b) {
        return a.similarity != b.similarity ? a.similarity > b.similarity : a.doc_id < b.doc_id;
    };
    const auto keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
    scored.resize(keep);
    return scored;
}

nlohmann::json TfIdfIndex::to_json() const {
    nlohmann::json j;
    j["corpus_size"] = corpus_size_;
    j["df"] = df_;
    auto& docs = j["documents"] = nlohmann::json::array();
    for (const auto& d : docs_) docs.push_back({{"doc_id", d.doc_id}, {"weights", d.weights}});
    return j;
}

TfIdfIndex TfIdfIndex::from_json(const nlohmann::json& j) {
    TfIdfIndex index;
    index.corpus_size_ = j.at("corpus_size").get<std::size_t>();
    index.df_ = j.at("df").get<std::map<std::string, std::size_t>>();
    for (const auto& d : j.at("documents")) {
        DocVector dv{d.at("doc_id").get<std::string>(), d.at("weights").get<std::map<std::string, double>>(), 0.0};
        for (const auto& [t, w] : dv.weights) dv.norm += w * w;
        dv.norm = std::sqrt(dv.norm);
        index.docs_.push_back(std::move(dv));
    }
    index.reindex();
    return index;
}

std::vector<std::pair<std::string, std::string>> blog_documents(const BlogDump& dump) {
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(dump.posts.size() + dump.comments.size());
    for (const auto& p : dump.posts) docs.emplace_back("post/" + p.post_id, p.title + "\n" + p.body);
    for (const auto& c : dump.comments) docs.emplace_back("comment/" + c.comment_id, c.body);
    return docs;
}

std::map<EntityId, std::vector<std::string>> author_documents(const BlogDump& dump) {
    std::map<EntityId, std::vector<std::string>> out;
    for (const auto& p : dump.posts) {
        std::string text = p.title + "\n" + p.body;
        for (const auto& t : p.tags) text += "\n" + t;
        out[p.author].push_back(std::move(text));
    }
    for (const auto& c : dump.comments) out[c.author].push_back(c.body);
    return out;
}

}  // namespace socnet
