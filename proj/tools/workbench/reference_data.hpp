#pragma once

#include <array>

namespace qode::workbench {

// Reference condition-number curves for the twisted Toeplitz family,
// d = 10, 12, ..., 100.
struct ReferencePoint {
  int d;
  double value;
};

inline constexpr std::array<ReferencePoint, 46> kKappaLReference{{
    {10, 38.0607720885288},
    {12, 38.9531633371435},
    {14, 39.5793828751334},
    {16, 40.041588546251},
    {18, 40.395840304143},
    {20, 40.6764561604494},
    {22, 40.9026988984043},
    {24, 41.0892360278268},
    {26, 41.2455631264072},
    {28, 41.3783932083567},
    {30, 41.492601108138},
    {32, 41.5925589751258},
    {34, 41.6795534906461},
    {36, 41.756408099356},
    {38, 41.8247827865856},
    {40, 41.8859960145504},
    {42, 41.9411078992081},
    {44, 41.9909802823533},
    {46, 42.0368630921021},
    {48, 42.0782722620973},
    {50, 42.1162244114355},
    {52, 42.1511320696512},
    {54, 42.183344952426},
    {56, 42.2131614379148},
    {58, 52.0563562214347},
    {60, 52.0955908834392},
    {62, 52.1322020087108},
    {64, 52.1664426541675},
    {66, 52.1985344826102},
    {68, 52.2292857711667},
    {70, 52.2576481874251},
    {72, 52.2843808958607},
    {74, 52.3096196688122},
    {76, 52.3334856626672},
    {78, 52.3560873275285},
    {80, 52.3775220257385},
    {82, 52.397877409668},
    {84, 52.4172325994714},
    {86, 52.4356591938305},
    {88, 52.4532221406322},
    {90, 52.4699804896807},
    {92, 52.4859880456493},
    {94, 52.5012939363354},
    {96, 52.5159431087533},
    {98, 52.5304249990391},
    {100, 52.5438821164605},
}};

inline constexpr std::array<ReferencePoint, 46> kKappaCReference{{
    {10, 49.1966591059611},
    {12, 50.1187676291374},
    {14, 59.9115269023128},
    {16, 60.4731126868349},
    {18, 60.9036861704982},
    {20, 61.244080722093},
    {22, 61.5190326003002},
    {24, 61.7457561257756},
    {26, 61.9357851708564},
    {28, 71.5578882183024},
    {30, 71.7169181902335},
    {32, 71.8551885323373},
    {34, 71.9762419715353},
    {36, 72.0831913171923},
    {38, 72.1783476960641},
    {40, 81.811072684157},
    {42, 81.8974229077151},
    {44, 81.9755717061187},
    {46, 82.0465750509564},
    {48, 82.1114128838389},
    {50, 82.1708420579035},
    {52, 91.818519508255},
    {54, 91.8745646747555},
    {56, 91.9264448454719},
    {58, 113.458076923363},
    {60, 113.529867551094},
    {62, 113.59686301892},
    {64, 113.659526234093},
    {66, 113.718262619853},
    {68, 125.657630188751},
    {70, 125.71473426971},
    {72, 125.768560050236},
    {74, 125.819380869077},
    {76, 125.867440612545},
    {78, 125.912957565724},
    {80, 125.956127676153},
    {82, 137.911836164867},
    {84, 137.954380237421},
    {86, 137.994886064801},
    {88, 138.033496281043},
    {90, 138.070340556611},
    {92, 138.105537034627},
    {94, 138.139193580708},
    {96, 138.171408873955},
    {98, 150.141168382894},
    {100, 150.17320815528},
}};

inline constexpr std::array<ReferencePoint, 46> kKappaVReference{{
    {10, 17.5352873756155},
    {12, 34.8261598350598},
    {14, 67.6775127475753},
    {16, 136.249461184391},
    {18, 309.828339089228},
    {20, 962.241221157035},
    {22, 1697.46202633565},
    {24, 2327.11057704636},
    {26, 4450.98797296117},
    {28, 8994.90682698602},
    {30, 17751.3331687894},
    {32, 36465.1803634661},
    {34, 84257.0282050832},
    {36, 262745.21049764},
    {38, 478064.541844091},
    {40, 656670.913763389},
    {42, 1262216.53833562},
    {44, 2561310.13680063},
    {46, 5076618.77458038},
    {48, 10480261.8170496},
    {50, 24302637.0004239},
    {52, 75306715.9100153},
    {54, 141688655.694126},
    {56, 193017057.291063},
    {58, 371208120.754903},
    {60, 754755078.474247},
    {62, 1499110861.59545},
    {64, 3099464297.81528},
    {66, 7190124193.18112},
    {68, 22084578476.5426},
    {70, 43003929167.0105},
    {72, 57880471065.0146},
    {74, 111231040608.656},
    {76, 226460116312.83},
    {78, 450446032266.413},
    {80, 930941973041.298},
    {82, 2156586157880.43},
    {84, 6663210939850.71},
    {86, 12946669170348.6},
    {88, 17583337392717.4},
    {90, 36344461788939},
    {92, 78551000295515.8},
    {94, 116852785073756},
    {96, 255576368857939},
    {98, 364610699997235},
    {100, 587523094872436},
}};

}  // namespace qode::workbench
