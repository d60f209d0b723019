//! Multi-threaded scan over enumerated spaces. Records come back in
//! canonical space order whatever the number of workers.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use ultratree_core::space::{enumerate_spaces_capped, scan_record, ScanRecord, ScanReport};
use ultratree_core::{Rational, RepresentOpts, SpaceError};

/// Scans all spaces on `n` points over `values`, skipping those whose id
/// satisfies `skip` (already present in a resumed output).
pub fn parallel_scan(
    n: usize,
    values: &[Rational],
    opts: &RepresentOpts,
    workers: usize,
    skip: impl Fn(&str) -> bool,
) -> Result<ScanReport, SpaceError> {
    let spaces = enumerate_spaces_capped(n, values, opts.cap())?;
    let jobs: Vec<(usize, _)> =
        spaces.into_iter().enumerate().filter(|(i, _)| !skip(&format!("n{n}-{i:04}"))).collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<ScanRecord, SpaceError>>>> = Mutex::new(vec![None; jobs.len()]);
    thread::scope(|s| {
        for _ in 0..workers.max(1).min(jobs.len().max(1)) {
            s.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some((i, x)) = jobs.get(j) else { break };
                let rec = scan_record(n, *i, x.clone(), opts);
                results.lock().unwrap()[j] = Some(rec);
            });
        }
    });
    let records = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScanReport::from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ultratree_core::conjecture_scan;

    #[test]
    fn worker_count_does_not_change_the_report() {
        let vals = [Rational::from_integer(1), Rational::from_integer(2), Rational::from_integer(3)];
        let opts = RepresentOpts::default();
        let serial = conjecture_scan(4, &vals, &opts).unwrap();
        for w in [1, 2, 5] {
            assert_eq!(parallel_scan(4, &vals, &opts, w, |_| false).unwrap(), serial);
        }
        let rest = parallel_scan(4, &vals, &opts, 3, |id| id == "n4-0000").unwrap();
        assert_eq!(rest.records, serial.records[1..]);
    }
}
