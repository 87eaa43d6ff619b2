#pragma once

// Reference per-chapter scores for the four translation pairs, as printed,
// together with the printed Average row. Chapters are listed in print order.

#include <array>
#include <string_view>

namespace verse_eval::reference {

inline constexpr std::array<int, 11> kChapters = {3, 5, 7, 8, 9, 10, 11, 12, 15, 16, 17};
inline constexpr std::array<std::string_view, 4> kPairs = {"GT-Gandhi", "GT-Purohit", "GT-Easwaren",
                                                           "Gandhi-Easwaren"};

// Mean per-verse Jaccard agreement of thresholded sentiment labels.
inline constexpr std::array<std::array<double, 11>, 4> kJaccard = {{
    {0.42, .374, .353, .341, .331, .324, .309, .315, .309, .316, .323},
    {.388, .373, .363, .362, .353, .351, .324, .323, .319, .328, .332},
    {.412, .401, .393, .377, .348, .357, .350, .357, .354, .359, .355},
    {.604, .568, .559, .547, .501, .523, .507, .500, .494, .500, .510},
}};
inline constexpr std::array<std::string_view, 4> kJaccardAverage = {"0.338", "0.347", "0.369", "0.526"};

// Cosine similarity cells "mean(std)".
inline constexpr std::array<std::array<std::string_view, 11>, 4> kCosine = {{
    {"0.52(0.156)", "0.34(0.082)", "0.35(0.194)", "0.36(0.086)", "0.33(0.108)", "0.33(0.121)",
     "0.36(0.118)", "0.35(0.122)", "0.40(0.135)", "0.38(0.126)", "0.30(0.077)"},
    {"0.58(0.148)", "0.61(0.133)", "0.56(0.232)", "0.34(0.104)", "0.36(0.113)", "0.37(0.118)",
     "0.38(0.108)", "0.40(0.159)", "0.39(0.129)", "0.37(0.128)", "0.35(0.128)"},
    {"0.59(0.120)", "0.51(0.187)", "0.35(0.100)", "0.38(0.098)", "0.35(0.103)", "0.38(0.093)",
     "0.38(0.105)", "0.35(0.118)", "0.37(0.142)", "0.41(0.089)", "0.33(0.115)"},
    {"0.63(0.133)", "0.63(0.129)", "0.70(0.144)", "0.66(0.123)", "0.68(0.126)", "0.76(0.096)",
     "0.71(0.109)", "0.61(0.120)", "0.69(0.116)", "0.66(0.096)", "0.65(0.111)"},
}};
inline constexpr std::array<std::string_view, 4> kCosineAverage = {"0.34(0.111)", "0.43(0.142)",
                                                                  "0.40(0.110)", "0.67(0.119)"};

}  // namespace verse_eval::reference
