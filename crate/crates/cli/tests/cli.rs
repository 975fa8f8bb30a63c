use std::path::Path;
use std::process::{Command, Output};

use gft_cli::fieldfile::{Encoding, FieldFile, Kind};
use gft_cli::ppm::{self, RgbImage};
use gft_core::transform::oracle::dft_complex_oracle;
use gft_core::transform::{default_freqs, gft};
use gft_core::{BladeIndex, Grid, Multivector, Preset, SampledField, Signature};
use num_complex::Complex64 as Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn gft_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gft")).args(args).output().expect("run gft")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_field(dir: &Path, name: &str, field: SampledField) -> String {
    let path = dir.join(name);
    std::fs::write(&path, FieldFile::new(Kind::Field, field).to_bytes(Encoding::Text)).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_field(path: &Path) -> FieldFile {
    FieldFile::from_bytes(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn transform_matches_complex_dft() {
    // span{1, e12} fields under clifford:2 are complex fields under a DFT
    let dir = TempDir::new().unwrap();
    let sig = Signature::euclidean(2).unwrap();
    let grid = Grid::new(vec![8, 8], vec![-4.0, -4.0], vec![1.0, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values: Vec<Complex> =
        (0..64).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let data = values
        .iter()
        .map(|c| {
            let mut m = Multivector::scalar(sig, c.re);
            m.set(BladeIndex(0b11), c.im);
            m
        })
        .collect();
    let field = write_field(dir.path(), "f.mvf", SampledField::new(sig, grid.clone(), data).unwrap());
    let out = dir.path().join("s.mvf");
    let o = gft_bin(&[
        "transform",
        "--field",
        &field,
        "--preset",
        "clifford:2",
        "--freqs",
        "auto",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let spectrum = read_field(&out);
    assert_eq!(spectrum.kind, Kind::Spectrum);
    let freqs = default_freqs(&grid, 1.0).unwrap();
    assert_eq!(spectrum.field.grid(), &freqs);
    let want = dft_complex_oracle(&values, &grid, &freqs).unwrap();
    for (got, w) in spectrum.field.data().iter().zip(&want) {
        assert!((Complex::new(got.scalar_part(), got.get(BladeIndex(0b11))) - w).norm() < 1e-10);
    }
}

#[test]
fn transform_with_kernel_file_and_binary_output() {
    let dir = TempDir::new().unwrap();
    let sig = Signature::anti_euclidean(2).unwrap();
    let grid = Grid::centered(2, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let field = SampledField::from_fn(sig, grid.clone(), |_| {
        Multivector::from_coeffs(sig, (0..4).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    })
    .unwrap();
    let field_path = write_field(dir.path(), "f.mvf", field.clone());
    let kernels = dir.path().join("k.toml");
    let cfg = gft_cli::kernelconfig::KernelConfig::from_spec(&Preset::Quaternionic.build().unwrap());
    std::fs::write(&kernels, cfg.emit()).unwrap();
    let freq_file = dir.path().join("u.grid");
    std::fs::write(&freq_file, "dims 3 2\norigin -0.25 0\nspacing 0.25 0.125\n").unwrap();
    let out = dir.path().join("s.mvf");
    let o = gft_bin(&[
        "transform",
        "--field",
        &field_path,
        "--kernels",
        kernels.to_str().unwrap(),
        "--freqs",
        freq_file.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--binary",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let spectrum = read_field(&out);
    let freqs = Grid::new(vec![3, 2], vec![-0.25, 0.0], vec![0.25, 0.125]).unwrap();
    let expected = gft(&Preset::Quaternionic.build().unwrap(), &field, &freqs).unwrap();
    assert_eq!(spectrum.field, expected);
}

#[test]
fn transform_errors_use_documented_exit_codes() {
    let dir = TempDir::new().unwrap();
    let sig = Signature::euclidean(2).unwrap();
    let field = write_field(dir.path(), "f.mvf", SampledField::zeros(sig, Grid::centered(2, 2).unwrap()));
    let out = dir.path().join("s.mvf");
    let out = out.to_str().unwrap();

    let o = gft_bin(&["transform", "--field", &field, "--preset", "fourier", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown preset"));

    let o = gft_bin(&["transform", "--field", &field, "--preset", "clifford:4", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported signature"), "{}", stderr(&o));

    let o = gft_bin(&["transform", "--field", "/nonexistent/f.mvf", "--preset", "clifford:2", "--out", out]);
    assert_eq!(o.status.code(), Some(3));

    let o = gft_bin(&["transform", "--field", &field, "--preset", "clifford:2", "--out", "/nonexistent/dir/s.mvf"]);
    assert_eq!(o.status.code(), Some(3));

    // a kernel squaring to +1 is named in the message
    let kernels = dir.path().join("bad.toml");
    std::fs::write(
        &kernels,
        "p = 2\nq = 0\nm = 2\n\n[[kernel]]\nside = \"right\"\nentries = [{ row = 1, col = 1, value = \"e1\" }]\n",
    )
    .unwrap();
    let field = write_field(
        dir.path(),
        "g.mvf",
        SampledField::from_fn(sig, Grid::centered(2, 2).unwrap(), |_| Multivector::one(sig)).unwrap(),
    );
    let o = gft_bin(&["transform", "--field", &field, "--kernels", kernels.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("right kernel 0"), "{}", stderr(&o));

    let o = gft_bin(&["transform", "--field", &field, "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = gft_bin(&["verify", "--theorem", "all", "--preset", "quaternionic", "--seed", "42", "--size", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 8);
    for line in &lines {
        let parsed: gft_core::theorems::ReportLine = line.parse().unwrap();
        assert_eq!(parsed.status, gft_core::theorems::Status::Pass, "{line}");
    }

    let o = gft_bin(&["verify", "--theorem", "shift", "--preset", "cylindrical:3", "--size", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SKIP(left kernels not separable)"), "{}", stdout(&o));

    let o = gft_bin(&["verify", "--theorem", "existence", "--preset", "clifford:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("THEOREM existence residual=0e0 bound="), "{}", stdout(&o));

    // an impossible tolerance turns rounding noise into failures
    let o = gft_bin(&["verify", "--theorem", "linearity", "--preset", "buelow:2", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).trim_end().ends_with("FAIL"));

    let o = gft_bin(&["verify", "--theorem", "convolution"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gft_bin(&["verify", "--preset", "clifford:4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn image_command() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("img.ppm");
    let out = dir.path().join("s.mvf");
    let run = |img: &RgbImage, extra: &[&str]| {
        std::fs::write(&input, ppm::encode(img)).unwrap();
        let mut args = vec!["image", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        gft_bin(&args)
    };

    let black = RgbImage { width: 3, height: 2, pixels: vec![[0, 0, 0]; 6] };
    assert_eq!(run(&black, &[]).status.code(), Some(0));
    assert!(read_field(&out).field.data().iter().all(Multivector::is_zero));

    // one white pixel at x = 0: every kernel vanishes, the spectrum is constant
    let white = RgbImage { width: 1, height: 1, pixels: vec![[255, 255, 255]] };
    assert_eq!(run(&white, &["--freqs", "auto:3"]).status.code(), Some(0));
    let spectrum = read_field(&out);
    let sig = Signature::euclidean(4).unwrap();
    let expected = Multivector::parse(sig, "e1 + e2 + e3").unwrap();
    assert!(spectrum.field.data().iter().all(|v| v.distance(&expected) < 1e-15));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let noise = RgbImage { width: 8, height: 8, pixels: (0..64).map(|_| rng.random::<[u8; 3]>()).collect() };
    let o = run(&noise, &["--bivector", "0.6*e12 + 0.8*e13", "--binary"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let spectrum = read_field(&out);
    assert_eq!(spectrum.field.grid().dims(), &[8, 8]);
    assert_eq!(spectrum.field.sig(), sig);

    assert_eq!(run(&noise, &["--bivector", "2*e12"]).status.code(), Some(2));
    assert_eq!(run(&noise, &["--bivector", "e5"]).status.code(), Some(2));
    std::fs::write(&input, b"P3\n1 1\n255\n0 0 0\n").unwrap();
    let o = gft_bin(&["image", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = gft_bin(&["image", "--input", "/nonexistent.ppm", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn presets_listing() {
    let o = gft_bin(&["presets"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    let cyl = |t: &str| {
        t.lines().find(|l| l.starts_with("cylindrical")).unwrap().split_whitespace().nth(5).unwrap().to_string()
    };
    assert_eq!(cyl(&text), "yes");
    assert_eq!(cyl(&stdout(&gft_bin(&["presets", "--n", "3"]))), "no");

    let json: serde_json::Value = serde_json::from_slice(&gft_bin(&["presets", "--json"]).stdout).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 8);
    assert_eq!(rows[2]["name"], "quaternionic");
    assert_eq!(rows[2]["mu"], 1);
}
