#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(events) = vmi_core::event::parse_event_records(text) {
            // accepted records must round-trip and survive the analyses
            for ev in events.iter().take(16) {
                let _ = ev.to_json_line();
                let _ = ev.to_csv_row();
                let _ = ev.coherent_bracket();
                let layout = vmi_core::gedanken::DetectorLayout::default();
                let _ = vmi_core::gedanken::pointing_reconstruction(ev, &layout, None);
                let _ = vmi_core::gedanken::flight_time_difference(ev, &layout);
            }
        }
    }
});
