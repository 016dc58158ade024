use cascade_timing::codec::{
    build_single_relay_code, codebooks, matches_counting_bound, run_pipeline, verify_exhaustive, Messages,
};
use cascade_timing::combinatorics::max_w0;

#[test]
fn ternary_codes_small_blocks() {
    for n in 2..=5 {
        for n1 in 1..n {
            let code = build_single_relay_code(n, n1, 3).unwrap();
            let blocks = if code.w0_size.pow(3) <= 1 << 18 { 3 } else { 2 };
            let checked = verify_exhaustive(&code, blocks, 1 << 18).unwrap();
            assert_eq!(checked, code.w0_size.pow(blocks as u32), "n = {n}, n1 = {n1}");
        }
    }
}

#[test]
fn sizes_meet_the_counting_bound() {
    for q in 1..=3 {
        for n in 2..=12 {
            for n1 in 1..n {
                let code = build_single_relay_code(n, n1, q).unwrap();
                assert!(matches_counting_bound(&code).unwrap(), "n = {n}, n1 = {n1}, q = {q}");
                assert_eq!(max_w0(&code.budgets().unwrap(), q), code.w0_size.into());
            }
        }
    }
}

#[test]
fn relay_codebook_is_injective() {
    for (n, n1, q) in [(4, 1, 2), (5, 2, 2), (6, 3, 1), (5, 2, 3)] {
        let code = build_single_relay_code(n, n1, q).unwrap();
        let books = codebooks(&code).unwrap();
        let relay = &books[1].columns[0].entries;
        let mut words: Vec<&str> = relay.iter().map(|e| e.word.as_str()).collect();
        words.sort_unstable();
        words.dedup();
        assert_eq!(words.len() as u64, code.w0_size);
        // one source column per relay position set in use
        assert!(books[0].columns.len() <= books[1].columns[0].entries.len());
    }
}

#[test]
fn long_runs_decode() {
    let code = build_single_relay_code(24, 7, 2).unwrap();
    let w0: Vec<u64> = (0..50u64).map(|i| (i * 2_654_435_761) % code.w0_size).collect();
    let run = run_pipeline(
        &code,
        &Messages {
            w0: w0.clone(),
            own: vec![],
        },
        50,
    )
    .unwrap();
    let got: Vec<u64> = run.sink.iter().map(|d| d.messages[0]).collect();
    assert_eq!(got, w0[..49]);
}

/// Every sequence of the largest binary code with `n <= 6` over four blocks;
/// 12,960,000 runs, so opt-in.
#[test]
#[ignore]
fn largest_binary_code_four_blocks() {
    let code = build_single_relay_code(6, 2, 2).unwrap();
    assert_eq!(verify_exhaustive(&code, 4, 1 << 24).unwrap(), 60u64.pow(4));
}
