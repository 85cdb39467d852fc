mod common;

use std::collections::BTreeSet;

use common::*;
use genderbeam::decode::{nbest_to_string, parse_nbest_str, Hypothesis, NBestList};
use genderbeam::eval::{score_records, testset_to_string, parse_testset_str, EvalRecord, RerankMode, TestItem};
use genderbeam::lattice::{compose_lattice, deserialize_lattice, serialize_lattice, IdentitySegmenter};
use genderbeam::morpho::{GenderLabel, GenderLexicon, LabelSet, ReinflectionPair, ReinflectionPairSet};
use genderbeam::rerank::{
    alignments_to_string, entities_to_string, parse_alignments_str, parse_entities_str, rerank,
    AlignmentMap, EntitySpec, EntityTable,
};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = GenderLabel> {
    prop_oneof![
        Just(GenderLabel::Masculine),
        Just(GenderLabel::Feminine),
        Just(GenderLabel::Neuter),
    ]
}

fn records() -> impl Strategy<Value = Vec<EvalRecord>> {
    let binary = prop_oneof![Just(GenderLabel::Masculine), Just(GenderLabel::Feminine)];
    prop::collection::vec((binary, prop::option::of(label())), 1..40).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (g, p))| EvalRecord::new(i, g, p))
            .collect()
    })
}

fn swap(g: &GenderLabel) -> GenderLabel {
    match g {
        GenderLabel::Masculine => GenderLabel::Feminine,
        GenderLabel::Feminine => GenderLabel::Masculine,
        other => other.clone(),
    }
}

/// Word pairs (a_i, b_i) with distinct words throughout.
fn word_pairs() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::btree_set("[a-z]{1,4}", 0..12).prop_map(|words| {
        let words: Vec<String> = words.into_iter().collect();
        words.chunks_exact(2).map(|c| (c[0].clone(), c[1].clone())).collect()
    })
}

fn pair_set(pairs: &[(String, String)]) -> ReinflectionPairSet {
    let mut set = ReinflectionPairSet::empty();
    for (a, b) in pairs {
        set.insert_bidirectional(a, GenderLabel::Masculine, b, GenderLabel::Feminine)
            .unwrap();
    }
    set
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nbest_round_trip(lists in nbest_lists()) {
        let back: Vec<NBestList> = parse_nbest_str(&nbest_to_string(&lists), "p").unwrap().into_values().collect();
        prop_assert_eq!(back, lists);
    }

    #[test]
    fn nbest_line_order_does_not_matter(lists in nbest_lists(), seed in any::<u64>()) {
        let mut lines: Vec<String> = nbest_to_string(&lists).lines().map(str::to_string).collect();
        // rotate whole sentences' lines around while keeping per-id order
        let k = (seed as usize) % lines.len().max(1);
        let ids: Vec<&str> = lines.iter().map(|l| l.split(' ').next().unwrap()).collect::<BTreeSet<_>>().into_iter().collect();
        let first = ids[k % ids.len()].to_string();
        lines.sort_by_key(|l| l.split(' ').next().unwrap() != first);
        let back: Vec<NBestList> = parse_nbest_str(&(lines.join("\n") + "\n"), "p").unwrap().into_values().collect();
        prop_assert_eq!(back, lists);
    }

    #[test]
    fn alignment_round_trip(table in alignment_tables()) {
        prop_assert_eq!(parse_alignments_str(&alignments_to_string(&table), "a").unwrap(), table);
    }

    #[test]
    fn lattice_round_trip(lattice in lattices()) {
        prop_assert_eq!(deserialize_lattice(&serialize_lattice(&lattice)).unwrap(), lattice);
    }

    #[test]
    fn lexicon_round_trip(entries in lexicon_entries()) {
        let labels = LabelSet::new().with("neutral-new").unwrap();
        let lex = GenderLexicon::from_entries(entries).unwrap();
        let back = GenderLexicon::parse_tsv(&lex.to_tsv(), &labels, "l").unwrap();
        prop_assert_eq!(back.to_tsv(), lex.to_tsv());
        prop_assert_eq!(back.len(), lex.len());
    }

    #[test]
    fn entity_and_testset_round_trip(
        rows in prop::collection::vec((0usize..30, label(), prop::option::of(0usize..9), prop::collection::btree_set(0usize..9, 1..4)), 1..10)
    ) {
        let mut table = EntityTable::new();
        for (id, g, t, idx) in &rows {
            table.entry(*id).or_default().push(EntitySpec::new(*t, g.clone(), idx.clone()).unwrap());
        }
        prop_assert_eq!(parse_entities_str(&entities_to_string(&table), "e").unwrap(), table);

        let mut seen = BTreeSet::new();
        let items: Vec<TestItem> = rows
            .into_iter()
            .filter(|(id, ..)| seen.insert(*id))
            .map(|(sent_id, gold_gender, trigger_index, entity_indices)| TestItem {
                sent_id,
                gold_gender,
                source: toks("a b c d e f g h i"),
                trigger_index,
                entity_indices,
            })
            .collect();
        prop_assert_eq!(parse_testset_str(&testset_to_string(&items), "t").unwrap(), items);
    }

    #[test]
    fn pair_sets_are_closed_under_reversal(pairs in word_pairs()) {
        let set = pair_set(&pairs);
        for p in set.iter() {
            prop_assert!(set.targets(&p.target).any(|q| q.target == p.source));
            prop_assert_ne!(&p.source, &p.target);
        }
        // dropping any one direction breaks closure
        let first = set.iter().next().cloned();
        if let Some(victim) = first {
            let rest: Vec<ReinflectionPair> = set.iter().filter(|p| **p != victim).cloned().collect();
            let rebuilt = ReinflectionPairSet::new(rest);
            prop_assert!(rebuilt.is_err());
        }
    }

    #[test]
    fn more_pairs_never_remove_paths(
        pairs in word_pairs(),
        extra in word_pairs(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5),
    ) {
        let small = pair_set(&pairs);
        let mut all = pairs.clone();
        // only add pairs over fresh words so the union stays a valid set
        let used: BTreeSet<&String> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        all.extend(extra.iter().filter(|(a, b)| !used.contains(a) && !used.contains(b)).cloned());
        let big = pair_set(&all);

        let vocab: Vec<String> = all.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).chain(["x".to_string()]).collect();
        let hyp: Vec<String> = picks.iter().map(|i| vocab[i.index(vocab.len())].clone()).collect();
        let l_small = compose_lattice(&small, &hyp, &IdentitySegmenter).unwrap();
        let l_big = compose_lattice(&big, &hyp, &IdentitySegmenter).unwrap();

        let paths = |l: &genderbeam::lattice::HypothesisLattice| -> BTreeSet<Vec<String>> {
            l.enumerate_paths(None).unwrap().into_iter().map(|p| p.words).collect()
        };
        let (ps, pb) = (paths(&l_small), paths(&l_big));
        prop_assert!(ps.is_subset(&pb));
        prop_assert!(ps.contains(&hyp));
        let product: u128 = (0..l_big.num_positions()).map(|i| l_big.arcs_at(i).len() as u128).product();
        prop_assert_eq!(l_big.path_count(), product);
        prop_assert_eq!(pb.len() as u128, product);
    }

    #[test]
    fn rerank_matches_exhaustive_argmax(
        hyps in prop::collection::vec((prop::collection::vec(prop::sample::select(vec!["el", "la", "médico", "médica", "y"]), 1..5), -8i32..=0), 1..8),
        links in prop::collection::vec(prop::collection::btree_set((0usize..4, 0usize..5), 0..6), 8),
        entity in prop::collection::btree_set(0usize..4, 1..3),
        feminine in any::<bool>(),
    ) {
        let lexicon = GenderLexicon::from_entries([
            genderbeam::morpho::LexiconEntry::new("el", "el", "ART", GenderLabel::Masculine),
            genderbeam::morpho::LexiconEntry::new("la", "el", "ART", GenderLabel::Feminine),
            genderbeam::morpho::LexiconEntry::new("médico", "médico", "N", GenderLabel::Masculine),
            genderbeam::morpho::LexiconEntry::new("médica", "médico", "N", GenderLabel::Feminine),
        ]).unwrap();
        let list = NBestList {
            source_id: 0,
            hypotheses: hyps.iter().map(|(t, lp)| Hypothesis::new(t.iter().map(|s| s.to_string()).collect(), *lp as f64 * 0.5)).collect(),
        };
        let aligns: Vec<AlignmentMap> = list.hypotheses.iter().zip(&links)
            .map(|(h, l)| AlignmentMap::new(l.iter().copied().filter(|&(_, t)| t < h.tokens.len())))
            .collect();
        let gender = if feminine { GenderLabel::Feminine } else { GenderLabel::Masculine };
        let spec = EntitySpec::new(None, gender.clone(), entity.clone()).unwrap();
        let agreements: Vec<usize> = list.hypotheses.iter().zip(&aligns).map(|(h, a)| {
            a.links.iter().filter(|(s, _)| entity.contains(s)).map(|&(_, t)| t)
                .collect::<BTreeSet<_>>().into_iter()
                .filter(|&t| lexicon.lookup(&h.tokens[t]).any(|e| e.gender == gender))
                .count()
        }).collect();
        let logliks: Vec<f64> = list.hypotheses.iter().map(|h| h.loglik).collect();
        let got = rerank(&list, &aligns, &[spec], &lexicon).unwrap();
        prop_assert_eq!(got.selected_index, exhaustive_argmax(&agreements, &logliks));
    }

    #[test]
    fn delta_g_is_antisymmetric(recs in records()) {
        let swapped: Vec<EvalRecord> = recs.iter()
            .map(|r| EvalRecord::new(r.sent_id, swap(&r.gold_gender), r.predicted_gender.as_ref().map(swap)))
            .collect();
        let a = score_records(&recs).unwrap();
        let b = score_records(&swapped).unwrap();
        prop_assert_eq!(a.delta_g, -b.delta_g);
        prop_assert_eq!(a.accuracy, b.accuracy);
        prop_assert!((-1.0..=1.0).contains(&a.delta_g));
    }

    #[test]
    fn metrics_ignore_record_order(recs in records(), seed in any::<u64>()) {
        let mut shuffled = recs.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let a = score_records(&recs).unwrap();
        let b = score_records(&shuffled).unwrap();
        let correct = recs.iter().filter(|r| r.correct).count() as f64;
        prop_assert_eq!(a.accuracy, correct / n as f64);
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    /// On any fixed candidate lists, oracle reranking is never less accurate
    /// than taking the most likely hypothesis.
    #[test]
    fn oracle_rerank_never_hurts(
        sel in prop::collection::vec(prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>(), -20i32..0), 1..6), 20),
    ) {
        let bench = Bench::bundled();
        let pipe = bench.pipeline(4, 4);
        let mut off = Vec::new();
        let mut oracle = Vec::new();
        for (item, variants) in bench.data.testset.iter().zip(&sel) {
            let hyps: Vec<Hypothesis> = variants.iter().map(|&(a, b, c, d, lp)| {
                let f = |fem: bool, m: &str, w: &str| if fem { w.to_string() } else { m.to_string() };
                let tokens = vec![
                    f(a, "el", "la"), f(b, "médico", "médica"), "llamó".into(),
                    f(c, "al", "ala"), f(d, "maestro", "maestra"), "porque".into(),
                    "ella".into(), "estaba".into(), "cansada".into(),
                ];
                Hypothesis::new(tokens, lp as f64 * 0.25)
            }).collect();
            let list = NBestList::new(item.sent_id, hyps);
            off.push(pipe.judge(item, list.clone(), RerankMode::Off).unwrap().record);
            oracle.push(pipe.judge(item, list, RerankMode::Oracle).unwrap().record);
        }
        let a_off = score_records(&off).unwrap().accuracy;
        let a_or = score_records(&oracle).unwrap().accuracy;
        prop_assert!(a_or >= a_off, "oracle {} < 1-best {}", a_or, a_off);
    }
}
