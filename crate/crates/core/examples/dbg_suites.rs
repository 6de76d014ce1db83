use rotor_mub::verify::*;

fn main() {
    let params = VerifyParams::default();
    let t0 = std::time::Instant::now();
    for suite in Suite::all() {
        let t = std::time::Instant::now();
        let rep = run_suite::<f64>(suite, &params);
        let status = if rep.all_pass() { "PASS" } else { "FAIL" };
        println!("== {} [{status}] ({:.2?})", rep.suite, t.elapsed());
        for r in &rep.rows {
            let mark = if r.pass { "ok  " } else { "FAIL" };
            println!("  {mark} {:40} {:18} dev {:10.3e} tol {:8.1e} ({:.3}s)", r.check, r.citation, r.deviation, r.tolerance, r.seconds);
        }
    }
    println!("total {:.2?}", t0.elapsed());
}
