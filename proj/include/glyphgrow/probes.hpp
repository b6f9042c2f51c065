#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "glyphgrow/corpus.hpp"
#include "glyphgrow/errors.hpp"
#include "glyphgrow/model.hpp"
#include "glyphgrow/moe.hpp"
#include "glyphgrow/serialize.hpp"

namespace glyphgrow {

// exp of the token-averaged NLL (natural log, PAD ignored).
inline double perplexity(const LogitsFn& logits_fn, const TokenCorpus& corpus, int batch_size,
                         int time) {
    return std::exp(eval_loss(logits_fn, corpus, batch_size, time));
}

inline double perplexity(const TransformerModel& m, const TokenCorpus& corpus, int batch_size,
                         int time) {
    return perplexity([&](const std::vector<int>& ids, int b, int t) { return forward(m, ids, b, t); },
                      corpus, batch_size, time);
}

inline double perplexity(const MoEComposite& moe, const TokenCorpus& corpus, int batch_size,
                         int time) {
    return perplexity(
        [&](const std::vector<int>& ids, int b, int t) { return moe_forward(moe, ids, b, t); }, corpus,
        batch_size, time);
}

// --- k-hop composition probe -------------------------------------------------
// Each example lists the pairs of a random permutation f over m symbols,
// separated by SEP, then a query marker and a start symbol. The answer is
// f^k(start), so chance accuracy is exactly 1/m and solving k >= 2 requires
// composing lookups across the context.

struct KHopExample {
    std::vector<int> context;  // pair list + query marker + start symbol
    int answer = 0;            // token id of f^k(start)
};

struct KHopDataset {
    int k = 0;
    int pool_size = 0;
    std::vector<int> symbol_ids;
    int sep_id = -1;
    int query_id = -1;
    std::vector<KHopExample> examples;

    // training documents: context followed by the answer token
    std::vector<std::vector<int>> docs() const {
        std::vector<std::vector<int>> out;
        out.reserve(examples.size());
        for (const auto& e : examples) {
            auto d = e.context;
            d.push_back(e.answer);
            out.push_back(std::move(d));
        }
        return out;
    }
};

inline constexpr std::uint32_t kKHopQueryMarker = '?';

// Symbols are the first pool_size lowercase Latin letters; the query marker
// is '?'. All of them plus SEP must exist in the vocab.
inline KHopDataset make_khop_task(const VocabSpec& vocab, int k, int pool_size, int n_examples,
                                  std::uint64_t seed) {
    if (k < 1 || k > 3) throw Error("make_khop_task: k must be in {1,2,3}");
    if (pool_size < 8 || pool_size > 26) throw Error("make_khop_task: pool size must be in [8,26]");
    KHopDataset ds;
    ds.k = k;
    ds.pool_size = pool_size;
    for (int i = 0; i < pool_size; ++i) {
        int id = vocab.index_of_codepoint('a' + i);
        if (id < 0) throw Error(std::string("make_khop_task: vocab lacks symbol '") +
                                static_cast<char>('a' + i) + "'");
        ds.symbol_ids.push_back(id);
    }
    ds.sep_id = vocab.index_of_special("SEP");
    if (ds.sep_id < 0) throw Error("make_khop_task: vocab lacks SEP");
    ds.query_id = vocab.index_of_codepoint(kKHopQueryMarker);
    if (ds.query_id < 0) throw Error("make_khop_task: vocab lacks '?'");

    Rng rng = Rng::derive(seed, "khop");
    for (int e = 0; e < n_examples; ++e) {
        // random permutation f and random presentation order
        std::vector<int> f(pool_size), order(pool_size);
        std::iota(f.begin(), f.end(), 0);
        std::iota(order.begin(), order.end(), 0);
        for (int i = pool_size - 1; i > 0; --i) {
            std::swap(f[i], f[rng.next_below(i + 1)]);
            std::swap(order[i], order[rng.next_below(i + 1)]);
        }
        KHopExample ex;
        for (int i = 0; i < pool_size; ++i) {
            const int x = order[i];
            ex.context.push_back(ds.symbol_ids[x]);
            ex.context.push_back(ds.symbol_ids[f[x]]);
            ex.context.push_back(ds.sep_id);
        }
        const int start = static_cast<int>(rng.next_below(pool_size));
        ex.context.push_back(ds.query_id);
        ex.context.push_back(ds.symbol_ids[start]);
        int a = start;
        for (int h = 0; h < k; ++h) a = f[a];
        ex.answer = ds.symbol_ids[a];
        ds.examples.push_back(std::move(ex));
    }
    return ds;
}

// Greedy next-token prediction at the answer position; exact-match fraction.
inline double khop_accuracy(const TransformerModel& m, const KHopDataset& ds, int bos_id) {
    if (ds.examples.empty()) throw Error("khop_accuracy: empty dataset");
    const int v = m.config.vocab_size;
    int hits = 0;
    // batch the contexts (all the same length by construction)
    const int t = static_cast<int>(ds.examples[0].context.size()) + 1;  // BOS + context
    if (t > m.config.context_len) throw Error("khop_accuracy: context exceeds model window");
    const int bs = 32;
    for (std::size_t start = 0; start < ds.examples.size(); start += bs) {
        const int n = static_cast<int>(std::min<std::size_t>(bs, ds.examples.size() - start));
        std::vector<int> ids(static_cast<std::size_t>(n) * t);
        for (int i = 0; i < n; ++i) {
            const auto& ex = ds.examples[start + i];
            ids[static_cast<std::size_t>(i) * t] = bos_id;
            for (std::size_t j = 0; j < ex.context.size(); ++j) {
                ids[static_cast<std::size_t>(i) * t + 1 + j] = ex.context[j];
            }
        }
        Tensor logits = forward(m, ids, n, t);
        for (int i = 0; i < n; ++i) {
            const float* row = logits.data().data() + (static_cast<std::size_t>(i) * t + (t - 1)) * v;
            int pick = 0;
            for (int j = 1; j < v; ++j) {
                if (row[j] > row[pick]) pick = j;
            }
            if (pick == ds.examples[start + i].answer) ++hits;
        }
    }
    return static_cast<double>(hits) / ds.examples.size();
}

// --- probe report --------------------------------------------------------------

struct ProbeRow {
    std::string model_id;
    int n_layer = 0;
    std::string probe;   // e.g. "ppl_mixed", "khop2_acc"
    std::string metric;  // "perplexity" or "accuracy"
    double value = 0.0;
    std::uint64_t seed = 0;
};

struct ProbeReport {
    std::vector<ProbeRow> rows;
};

inline std::string report_to_csv(const ProbeReport& report) {
    std::string out = "model_id,n_layer,probe,metric,value,seed\n";
    for (const auto& r : report.rows) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", r.value);
        out += r.model_id + "," + std::to_string(r.n_layer) + "," + r.probe + "," + r.metric + "," +
               buf + "," + std::to_string(r.seed) + "\n";
    }
    return out;
}

inline ProbeReport report_from_csv(const std::string& text, std::string_view source = "<memory>") {
    ProbeReport rep;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "model_id,n_layer,probe,metric,value,seed") {
                throw ParseError(std::string(source) + ": bad report header");
            }
            continue;
        }
        std::vector<std::string> cols;
        std::size_t p = 0;
        while (true) {
            std::size_t c = line.find(',', p);
            if (c == std::string::npos) {
                cols.push_back(line.substr(p));
                break;
            }
            cols.push_back(line.substr(p, c - p));
            p = c + 1;
        }
        if (cols.size() != 6) {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": expected 6 columns");
        }
        ProbeRow r;
        r.model_id = cols[0];
        r.n_layer = std::stoi(cols[1]);
        r.probe = cols[2];
        r.metric = cols[3];
        r.value = std::stod(cols[4]);
        r.seed = std::stoull(cols[5]);
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

namespace detail {

inline std::string svg_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace detail

// One polyline per probe over n_layer, 800x480 viewBox, byte-deterministic.
inline std::string report_to_svg(const ProbeReport& report) {
    const double width = 800, height = 480;
    const double ml = 60, mr = 160, mt = 24, mb = 44;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"480\" fill=\"white\"/>\n";

    // collect per-probe series sorted by n_layer
    std::map<std::string, std::map<int, double>> series;
    int min_layer = 1, max_layer = 1;
    double min_v = 0.0, max_v = 1.0;
    bool first = true;
    for (const auto& r : report.rows) {
        series[r.probe][r.n_layer] = r.value;
        if (first) {
            min_layer = max_layer = r.n_layer;
            min_v = max_v = r.value;
            first = false;
        } else {
            min_layer = std::min(min_layer, r.n_layer);
            max_layer = std::max(max_layer, r.n_layer);
            min_v = std::min(min_v, r.value);
            max_v = std::max(max_v, r.value);
        }
    }
    if (max_layer == min_layer) max_layer = min_layer + 1;
    if (max_v - min_v < 1e-12) max_v = min_v + 1.0;

    auto sx = [&](double layer) {
        return ml + (layer - min_layer) / (max_layer - min_layer) * (width - ml - mr);
    };
    auto sy = [&](double v) { return height - mb - (v - min_v) / (max_v - min_v) * (height - mt - mb); };

    // axes
    svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(height - mb) +
           "\" x2=\"" + detail::svg_num(width - mr) + "\" y2=\"" + detail::svg_num(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt) + "\" x2=\"" +
           detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::svg_num((ml + width - mr) / 2) + "\" y=\"" +
           detail::svg_num(height - 10) + "\" font-size=\"14\" text-anchor=\"middle\">n_layer</text>\n";
    svg += "<text x=\"16\" y=\"" + detail::svg_num((mt + height - mb) / 2) +
           "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           detail::svg_num((mt + height - mb) / 2) + ")\">value</text>\n";

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    int ci = 0;
    for (const auto& [probe, points] : series) {
        const char* color = kColors[ci % 8];
        std::string pts;
        for (const auto& [layer, value] : points) {
            pts += detail::svg_num(sx(layer)) + "," + detail::svg_num(sy(value)) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
               pts + "\"/>\n";
        svg += "<text x=\"" + detail::svg_num(width - mr + 12) + "\" y=\"" +
               detail::svg_num(mt + 18 + 20 * ci) + "\" font-size=\"13\" fill=\"" + color + "\">" +
               probe + "</text>\n";
        ++ci;
    }
    svg += "</svg>\n";
    return svg;
}

struct ReportFiles {
    std::string csv_path;
    std::string svg_path;
};

inline ReportFiles emit_report(const ProbeReport& report, const std::string& out_dir) {
    ReportFiles files;
    files.csv_path = out_dir + "/report.csv";
    files.svg_path = out_dir + "/curves.svg";
    atomic_write_file(files.csv_path, report_to_csv(report));
    atomic_write_file(files.svg_path, report_to_svg(report));
    return files;
}

}  // namespace glyphgrow
