#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glyphgrow/errors.hpp"
#include "glyphgrow/rng.hpp"
#include "glyphgrow/tensor.hpp"
#include "glyphgrow/utf8.hpp"
#include "glyphgrow/vocab.hpp"

namespace glyphgrow {

// Token-id documents plus the ids the batcher needs. With
// answer_supervision set, only each document's final token is a target
// (question-answering style); everything before it is masked to PAD.
struct TokenCorpus {
    std::vector<std::vector<int>> docs;
    int pad_id = -1;
    int bos_id = -1;
    bool answer_supervision = false;
};

inline TokenCorpus encode_corpus(const std::vector<std::string>& docs, const VocabSpec& vocab) {
    TokenCorpus c;
    c.pad_id = vocab.index_of_special("PAD");
    c.bos_id = vocab.index_of_special("BOS");
    if (c.pad_id < 0 || c.bos_id < 0) throw Error("corpus vocab must declare PAD and BOS specials");
    for (const auto& d : docs) c.docs.push_back(vocab.encode(utf8_decode(d)));
    return c;
}

struct Batch {
    std::vector<int> x;  // [batch, time] inputs
    std::vector<int> y;  // [batch, time] next-token targets, PAD where absent
    int batch = 0;
    int time = 0;
};

namespace detail {

// One training window from a document: a length time+1 slice of [BOS] + doc,
// padded with PAD at the tail. x = slice[:-1], y = slice[1:].
inline void fill_window(const std::vector<int>& doc, int bos_id, int pad_id, int time,
                        std::size_t offset, int* x, int* y) {
    const std::size_t aug_len = doc.size() + 1;
    for (int t = 0; t <= time; ++t) {
        const std::size_t pos = offset + t;
        int tok = pad_id;
        if (pos == 0) {
            tok = bos_id;
        } else if (pos < aug_len) {
            tok = doc[pos - 1];
        }
        if (t < time) x[t] = tok;
        if (t > 0) y[t - 1] = tok;
    }
}

// Masks every target except the document's final token.
inline void mask_to_answer(const std::vector<int>& doc, int pad_id, int time, int* y) {
    const int answer_pos = static_cast<int>(doc.size()) - 1;
    for (int t = 0; t < time; ++t) {
        if (t != answer_pos) y[t] = pad_id;
    }
}

}  // namespace detail

// Samples batch_size random document windows.
inline Batch make_batch(const TokenCorpus& corpus, Rng& rng, int batch_size, int time) {
    if (corpus.docs.empty()) throw Error("make_batch: empty corpus");
    Batch b;
    b.batch = batch_size;
    b.time = time;
    b.x.resize(static_cast<std::size_t>(batch_size) * time);
    b.y.resize(static_cast<std::size_t>(batch_size) * time);
    for (int i = 0; i < batch_size; ++i) {
        const auto& doc = corpus.docs[rng.next_below(corpus.docs.size())];
        const std::size_t aug_len = doc.size() + 1;
        std::size_t offset = 0;
        if (aug_len > static_cast<std::size_t>(time) + 1) {
            if (corpus.answer_supervision) {
                throw Error("make_batch: answer-supervised documents must fit in the window");
            }
            offset = rng.next_below(aug_len - time);
        }
        int* y = b.y.data() + static_cast<std::size_t>(i) * time;
        detail::fill_window(doc, corpus.bos_id, corpus.pad_id, time, offset,
                            b.x.data() + static_cast<std::size_t>(i) * time, y);
        if (corpus.answer_supervision) detail::mask_to_answer(doc, corpus.pad_id, time, y);
    }
    return b;
}

// Deterministic full pass over the corpus: every document from offset 0,
// grouped into fixed-size batches (short tail batch included).
inline std::vector<Batch> eval_batches(const TokenCorpus& corpus, int batch_size, int time) {
    std::vector<Batch> out;
    const std::size_t n = corpus.docs.size();
    for (std::size_t start = 0; start < n; start += batch_size) {
        const int bs = static_cast<int>(std::min<std::size_t>(batch_size, n - start));
        Batch b;
        b.batch = bs;
        b.time = time;
        b.x.resize(static_cast<std::size_t>(bs) * time);
        b.y.resize(static_cast<std::size_t>(bs) * time);
        for (int i = 0; i < bs; ++i) {
            const auto& doc = corpus.docs[start + i];
            if (corpus.answer_supervision && doc.size() + 1 > static_cast<std::size_t>(time) + 1) {
                throw Error("eval_batches: answer-supervised documents must fit in the window");
            }
            int* y = b.y.data() + static_cast<std::size_t>(i) * time;
            detail::fill_window(doc, corpus.bos_id, corpus.pad_id, time, 0,
                                b.x.data() + static_cast<std::size_t>(i) * time, y);
            if (corpus.answer_supervision) detail::mask_to_answer(doc, corpus.pad_id, time, y);
        }
        out.push_back(std::move(b));
    }
    return out;
}

using LogitsFn = std::function<Tensor(const std::vector<int>& ids, int batch, int time)>;

// Token-weighted mean NLL (natural log, PAD ignored) over a full corpus pass.
inline double eval_loss(const LogitsFn& logits_fn, const TokenCorpus& corpus, int batch_size,
                        int time) {
    if (corpus.docs.empty()) throw Error("eval_loss: empty corpus");
    double total = 0.0;
    std::int64_t kept = 0;
    for (const auto& b : eval_batches(corpus, batch_size, time)) {
        Tensor logits = logits_fn(b.x, b.batch, b.time);
        const int v = logits.dim(logits.rank() - 1);
        Tensor flat = reshape(logits, {b.batch * b.time, v});
        std::int64_t batch_kept = 0;
        for (int t : b.y) {
            if (t != corpus.pad_id) ++batch_kept;
        }
        if (batch_kept == 0) continue;
        Tensor loss = cross_entropy_mean(flat, b.y, corpus.pad_id);
        total += static_cast<double>(loss.scalar()) * batch_kept;
        kept += batch_kept;
    }
    if (kept == 0) throw UndefinedLossError("eval_loss: no non-pad targets in corpus");
    return total / kept;
}

// --- synthetic bilingual corpora -------------------------------------------

// Desk-scale analog of language-specialised training sets: two disjoint
// scripts (Latin vs Cyrillic) sharing only punctuation, each generated by an
// order-2 Markov chain with its own seeded transition table.
struct SyntheticCorpus {
    std::string script;  // "A", "B" or "mixed"
    std::uint64_t seed = 0;
    std::vector<std::string> train_docs;    // UTF-8
    std::vector<std::string> heldout_docs;  // UTF-8, disjoint from train
};

struct BilingualCorpora {
    SyntheticCorpus a;
    SyntheticCorpus b;
    std::vector<std::string> mixed_heldout;  // 50/50 unseen docs from both
};

namespace detail {

class MarkovChain {
  public:
    MarkovChain(std::vector<std::uint32_t> alphabet, std::uint64_t seed)
        : alphabet_(std::move(alphabet)) {
        const std::size_t n = alphabet_.size();
        Rng rng(seed);
        weights_.resize(n * n * n);
        for (auto& w : weights_) {
            // heavy-tailed weights make contexts predictive enough to learn
            w = static_cast<float>(std::exp(2.0 * rng.next_normal()));
        }
    }

    std::string sample_doc(int length, Rng& rng) const {
        const std::size_t n = alphabet_.size();
        std::vector<std::uint32_t> cps;
        cps.reserve(length);
        std::size_t c1 = 0, c2 = rng.next_below(n);
        for (int i = 0; i < length; ++i) {
            const float* row = weights_.data() + (c1 * n + c2) * n;
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) total += row[j];
            double u = rng.next_double() * total;
            std::size_t pick = n - 1;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                acc += row[j];
                if (u < acc) {
                    pick = j;
                    break;
                }
            }
            cps.push_back(alphabet_[pick]);
            c1 = c2;
            c2 = pick;
        }
        return utf8_encode(cps);
    }

  private:
    std::vector<std::uint32_t> alphabet_;
    std::vector<float> weights_;
};

inline std::vector<std::uint32_t> latin_alphabet() {
    std::vector<std::uint32_t> a = {' ', '.', ','};
    for (std::uint32_t c = 'a'; c <= 'z'; ++c) a.push_back(c);
    return a;
}

inline std::vector<std::uint32_t> cyrillic_alphabet() {
    std::vector<std::uint32_t> a = {' ', '.', ','};
    for (std::uint32_t c = 0x0430; c <= 0x044F; ++c) a.push_back(c);  // а..я
    return a;
}

}  // namespace detail

inline BilingualCorpora make_bilingual_corpora(std::uint64_t seed, int docs_per_language,
                                               int doc_length) {
    if (docs_per_language < 1 || doc_length < 1) {
        throw Error("make_bilingual_corpora: sizes must be >= 1");
    }
    BilingualCorpora out;
    const int heldout = std::max(1, docs_per_language / 5);
    struct Lang {
        SyntheticCorpus* corpus;
        std::vector<std::uint32_t> alphabet;
        const char* tag;
    };
    out.a.script = "A";
    out.b.script = "B";
    out.a.seed = seed;
    out.b.seed = seed;
    for (auto& [corpus, alphabet, tag] :
         std::vector<Lang>{{&out.a, detail::latin_alphabet(), "A"},
                           {&out.b, detail::cyrillic_alphabet(), "B"}}) {
        detail::MarkovChain chain(alphabet, Rng::derive(seed, std::string("table/") + tag).next_u64());
        Rng doc_rng = Rng::derive(seed, std::string("docs/") + tag);
        for (int i = 0; i < docs_per_language; ++i) {
            corpus->train_docs.push_back(chain.sample_doc(doc_length, doc_rng));
        }
        for (int i = 0; i < heldout; ++i) {
            corpus->heldout_docs.push_back(chain.sample_doc(doc_length, doc_rng));
        }
    }
    for (int i = 0; i < heldout; ++i) {
        out.mixed_heldout.push_back(out.a.heldout_docs[i]);
        out.mixed_heldout.push_back(out.b.heldout_docs[i]);
    }
    return out;
}

}  // namespace glyphgrow
