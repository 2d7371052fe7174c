//! Show how `Random_Msg_Gen_Parameter = [m, n]` shapes the event schedule:
//! m occurrence times per n-hour window, pro-rata (rounded down) in a
//! trailing partial window.
//!
//! ```bash
//! cargo run -p urbandtn --example event_schedule
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use urbandtn::events::schedule_events;
use urbandtn::report::convert_hms;

fn main() {
    let rate = (3u32, 0.5f64); // 3 events per half hour
    let horizon = 2.25f64; // 4 full windows + a half window
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let times = schedule_events(rate, horizon, &mut rng);

    println!(
        "rate [m, n] = [{}, {}], horizon {} h -> {} events",
        rate.0,
        rate.1,
        horizon,
        times.len()
    );

    let full_windows = (horizon / rate.1).floor() as u64;
    for k in 0..=full_windows {
        let lo = k as f64 * rate.1;
        let hi = ((k + 1) as f64 * rate.1).min(horizon);
        if lo >= horizon {
            break;
        }
        let members: Vec<String> = times
            .iter()
            .filter(|&&t| t >= lo && t < hi)
            .map(|&t| convert_hms(t))
            .collect();
        let marker = if hi - lo < rate.1 { " (partial)" } else { "" };
        println!(
            "  window [{:.2}, {:.2}){marker}: {} event(s) at {}",
            lo,
            hi,
            members.len(),
            if members.is_empty() { "-".to_string() } else { members.join(" ") }
        );
    }

    println!("\nsame seed, same schedule:");
    let mut rng2 = ChaCha8Rng::seed_from_u64(42);
    let again = schedule_events(rate, horizon, &mut rng2);
    println!("  identical: {}", times == again);
}
