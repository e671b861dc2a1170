use nalgebra::{DMatrix, Point3, Vector3};
use proptest::prelude::*;

use owc_rsma::channel::{
    build_channel_matrix, noise_variance, normalize_channel, ChannelMatrix, NoiseParams,
};
use owc_rsma::harness::drop_seed;
use owc_rsma::optics::{
    beam_radius, rayleigh_distance, received_power_centered, received_power_offaxis, VcselParams,
};
use owc_rsma::rsma::{conventional_rs_rate, default_alpha_grid, optimize_alpha, rs_sum_rate};
use owc_rsma::scene::{
    default_ap_positions, fov_accept, photodiode_normals, ray_geometry, sample_user_positions,
    AdrConfig, RoomConfig, Scene, UserDrop,
};

fn room() -> RoomConfig {
    RoomConfig::default()
}

fn arrival(theta: f64, phi: f64) -> Vector3<f64> {
    -Vector3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

fn floor_point() -> impl Strategy<Value = Point3<f64>> {
    (0.01f64..4.99, 0.01f64..4.99).prop_map(|(x, y)| Point3::new(x, y, 0.85))
}

fn channel(max_k: usize, max_l: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (1..=max_k, 1..=max_l).prop_flat_map(|(k, l)| {
        prop::collection::vec(0.05f64..1.0, k * l)
            .prop_map(move |v| DMatrix::from_row_slice(k, l, &v))
    })
}

proptest! {
    #[test]
    fn user_drops_are_deterministic_and_inside_the_floor(seed in any::<u64>(), k in 1usize..40) {
        let a = sample_user_positions(seed, k, &room()).unwrap();
        let b = sample_user_positions(seed, k, &room()).unwrap();
        prop_assert_eq!(a.positions(), b.positions());
        for p in a.positions() {
            prop_assert!(p.x > 0.0 && p.x < 5.0 && p.y > 0.0 && p.y < 5.0);
            prop_assert_eq!(p.z, 0.85);
        }
    }

    #[test]
    fn photodiode_normals_are_unit_and_evenly_spaced(m in 1usize..12, tilt in 1.0f64..89.0) {
        let adr = AdrConfig { photodiodes: m, tilt_deg: tilt, ..AdrConfig::default() };
        let normals = photodiode_normals(&adr);
        prop_assert_eq!(normals.len(), m);
        prop_assert!(normals.iter().all(|n| (n.norm() - 1.0).abs() <= 1e-12));
        if m >= 3 {
            let step = 2.0 * std::f64::consts::PI / (m - 1) as f64;
            for w in normals[1..].windows(2) {
                let (a, b) = (w[0].y.atan2(w[0].x), w[1].y.atan2(w[1].x));
                let gap = (b - a).rem_euclid(2.0 * std::f64::consts::PI);
                prop_assert!((gap - step).abs() <= 1e-12, "gap {gap} vs {step}");
            }
        }
    }

    #[test]
    fn fov_acceptance_is_monotone_in_angle(
        t1 in 0.0f64..1.5, t2 in 0.0f64..1.5, phi in 0.0f64..std::f64::consts::TAU, fov in 1.0f64..89.0,
    ) {
        let (near, far) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let z = Vector3::z();
        let a = fov_accept(&z, &arrival(near, phi), fov).unwrap();
        let b = fov_accept(&z, &arrival(far, phi), fov).unwrap();
        prop_assert!(!b.accepted || a.accepted);
    }

    #[test]
    fn offset_is_zero_only_directly_below(user in floor_point(), ap_x in 0.5f64..4.5, ap_y in 0.5f64..4.5) {
        let ap = Point3::new(ap_x, ap_y, 3.0);
        let g = ray_geometry(&user, &ap).unwrap();
        prop_assert_eq!(g.r_offset == 0.0, user.x == ap.x && user.y == ap.y);
        let below = ray_geometry(&Point3::new(ap_x, ap_y, 0.85), &ap).unwrap();
        prop_assert_eq!(below.r_offset, 0.0);
    }

    #[test]
    fn beam_grows_with_distance(waist_um in 1.0f64..50.0, d1 in 0.0f64..5.0, d2 in 0.0f64..5.0) {
        prop_assume!(d1 != d2);
        let p = VcselParams::default().with_waist(waist_um * 1e-6);
        let (near, far) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(beam_radius(&p, near).unwrap() < beam_radius(&p, far).unwrap());
        prop_assert_eq!(beam_radius(&p, 0.0).unwrap(), p.waist_m);
    }

    #[test]
    fn far_field_spot_shrinks_with_waist(w1 in 1.0f64..30.0, dw in 0.5f64..20.0) {
        let small = VcselParams::default().with_waist(w1 * 1e-6);
        let large = VcselParams::default().with_waist((w1 + dw) * 1e-6);
        let d = 100.0 * rayleigh_distance(&large).unwrap();
        prop_assert!(beam_radius(&large, d).unwrap() < beam_radius(&small, d).unwrap());
        prop_assert!(beam_radius(&large, 0.0).unwrap() > beam_radius(&small, 0.0).unwrap());
    }

    #[test]
    fn centered_capture_bounds_and_monotonicity(
        r1 in 1e-4f64..0.05, r2 in 1e-4f64..0.05, w1 in 0.01f64..0.2, w2 in 0.01f64..0.2,
    ) {
        prop_assume!(r1 != r2 && w1 != w2);
        let p = VcselParams::default();
        let c = |r, w| received_power_centered(&p, r, w).unwrap();
        prop_assert!((0.0..=p.power_w).contains(&c(r1, w1)));
        let (rs, rl) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        let (ws, wl) = if w1 < w2 { (w1, w2) } else { (w2, w1) };
        prop_assert!(c(rs, w1) < c(rl, w1));
        prop_assert!(c(r1, ws) > c(r1, wl));
    }

    #[test]
    fn offaxis_capture_decreases_with_offset(o1 in 0.0f64..0.3, o2 in 0.0f64..0.3, w in 0.02f64..0.2) {
        prop_assume!(o1 != o2);
        let p = VcselParams::default();
        let at = |o| received_power_offaxis(&p, o, 1.2616e-3, w, 1.0).unwrap();
        let (near, far) = if o1 < o2 { (o1, o2) } else { (o2, o1) };
        prop_assert!(at(near) >= at(far));
        prop_assert!((at(1e-12) - at(0.0)).abs() <= 1e-12 * at(0.0));
    }

    #[test]
    fn channel_entries_stay_within_responsivity(seed in any::<u64>(), waist_um in 2.0f64..40.0, k in 1usize..12) {
        let users = sample_user_positions(seed, k, &room()).unwrap();
        let scene = Scene::new(room(), default_ap_positions(&room(), 4).unwrap(), users);
        let adr = AdrConfig::default();
        let cm = build_channel_matrix(
            &scene, &adr, &VcselParams::default().with_waist(waist_um * 1e-6), &NoiseParams::default(),
        ).unwrap();
        let bound = adr.effective_responsivity();
        prop_assert!(cm.h().iter().all(|&g| (0.0..=bound).contains(&g)));
    }

    #[test]
    fn swapping_users_swaps_rows(seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let users = sample_user_positions(seed, 5, &room()).unwrap();
        let mut swapped = users.positions().to_vec();
        swapped.swap(i, j);
        let swapped = UserDrop::from_positions(&room(), swapped, seed).unwrap();
        let aps = default_ap_positions(&room(), 4).unwrap();
        let (adr, vcsel, noise) = (AdrConfig::default(), VcselParams::default(), NoiseParams::default());
        let a = build_channel_matrix(&Scene::new(room(), aps.clone(), users), &adr, &vcsel, &noise).unwrap();
        let b = build_channel_matrix(&Scene::new(room(), aps, swapped), &adr, &vcsel, &noise).unwrap();
        let mut expected = a.h().clone();
        expected.swap_rows(i, j);
        prop_assert_eq!(&expected, b.h());
        prop_assert_eq!(a.sigma2(), b.sigma2());
    }

    #[test]
    fn shot_noise_adds_exactly(p_rx in 0.0f64..1e-2, resp in 0.01f64..1.0) {
        let on = NoiseParams::default();
        let off = NoiseParams { include_shot: false, ..on };
        let shot = 2.0 * on.charge * resp * p_rx * on.bandwidth_hz;
        prop_assert_eq!(noise_variance(&on, p_rx, resp), noise_variance(&off, p_rx, resp) + shot);
    }

    #[test]
    fn normalization_gives_unit_strongest_row(h in channel(8, 6), c in 1e-8f64..1e3) {
        let cm = normalize_channel(&ChannelMatrix::new(h * c, 1.0).unwrap()).unwrap();
        prop_assert!((cm.max_row_norm() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(cm.sigma2(), 1.0);
    }

    #[test]
    fn optimum_dominates_conventional(h in channel(8, 6), p_total in 0.1f64..1e3) {
        let cm = ChannelMatrix::new(h, 1.0).unwrap();
        let opt = optimize_alpha(&cm, p_total, &default_alpha_grid(cm.users())).unwrap();
        let conv = conventional_rs_rate(&cm, p_total).unwrap();
        prop_assert!(opt.evaluation.sum_rate >= conv.sum_rate);
    }

    #[test]
    fn sinrs_are_nonnegative(h in channel(8, 6), p_total in 0.1f64..1e3, alpha in 0.0f64..=1.0) {
        let ev = rs_sum_rate(&ChannelMatrix::new(h, 1.0).unwrap(), alpha, p_total).unwrap();
        prop_assert!(ev.gamma_c.iter().chain(&ev.gamma_p).all(|&g| g >= 0.0));
    }

    #[test]
    fn drop_seeds_are_pure(master in any::<u64>(), i in 0usize..10_000) {
        prop_assert_eq!(drop_seed(master, i), drop_seed(master, i));
        prop_assert_ne!(drop_seed(master, i), drop_seed(master, i + 1));
    }
}
