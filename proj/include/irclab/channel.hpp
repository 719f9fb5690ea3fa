#ifndef IRCLAB_CHANNEL_HPP
#define IRCLAB_CHANNEL_HPP

#include <cmath>

namespace irclab {

// Real-gain symmetric interference relay channel with per-node power budget P.
//   hd: desired link, hc: cross link, hr: relay->destination, hs: source->relay.
struct GaussianChannel {
    double hd = 1.0;
    double hc = 1.0;
    double hr = 1.0;
    double hs = 1.0;
    double P = 1.0;

    bool valid() const {
        return P > 0.0 && std::isfinite(hd) && std::isfinite(hc) && std::isfinite(hr) &&
               std::isfinite(hs) && std::isfinite(P);
    }
    bool strong_interference() const { return hc * hc > hd * hd; }

    double snr_d() const { return P * hd * hd; }
    double snr_c() const { return P * hc * hc; }
    double snr_r() const { return P * hr * hr; }
    double snr_s() const { return P * hs * hs; }
};

} // namespace irclab

#endif
