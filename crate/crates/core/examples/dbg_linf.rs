use besimax_core::*;

fn renorm(space: &NormedSpace, v: &mut [f64]) {
    let n = norm_eval(space, v).unwrap();
    for c in v.iter_mut() { *c /= n; }
}

fn minsep(space: &NormedSpace, pts: &[Vec<f64>]) -> f64 {
    min_separation(space, pts).unwrap()
}

fn main() {
    let space = NormedSpace::linf(2);
    let mut pts: Vec<Vec<f64>> = vec![
        vec![1.0, -0.9999148287151697],
        vec![0.999914828715213, 1.0],
        vec![-1.0, 0.9999148287151697],
        vec![-0.9999148287152132, -1.0],
    ];
    let mut eta = 0.05f64;
    let mut sep = minsep(&space, &pts);
    let mut accepts = 0; let mut rejects = 0;
    for round in 0..4000 {
        if eta < 1e-13 { println!("eta floor at round {round}"); break; }
        let band = sep + eta * 0.5;
        let n = pts.len();
        let mut dirs = vec![vec![0.0; 2]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j { continue; }
                let d = distance(&space, &pts[i], &pts[j]).unwrap();
                if d <= band && d > 1e-12 {
                    for k in 0..2 { dirs[i][k] += (pts[i][k] - pts[j][k]) / d; }
                }
            }
        }
        let gmax = dirs.iter().map(|g| (g[0]*g[0]+g[1]*g[1]).sqrt()).fold(0.0f64, f64::max);
        let scale = eta / gmax;
        let mut prop = pts.clone();
        for (v, g) in prop.iter_mut().zip(&dirs) {
            for (c, gc) in v.iter_mut().zip(g) { *c += scale * gc; }
            renorm(&space, v);
        }
        let cand = minsep(&space, &prop);
        if cand > sep {
            pts = prop; sep = cand; accepts += 1; eta = (eta*1.5).min(0.1);
        } else {
            rejects += 1;
            if round < 12 || round % 500 == 0 {
                println!("round {round}: REJECT eta={eta:.3e} sep={sep:.15} cand={cand:.15}");
            }
            eta *= 0.5;
        }
    }
    println!("final sep {:.15}, accepts {accepts}, rejects {rejects}", sep);
}
