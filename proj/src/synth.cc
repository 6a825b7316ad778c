/*
 * Copyright 2026 The vprex Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vprex/synth.h"

#include <algorithm>
#include <set>

#include "vprex/error.h"
#include "vprex/price.h"
#include "vprex/render.h"
#include "vprex/url.h"

namespace vprex {
namespace {

using Words = std::vector<std::string>;

const Words kBrands = {"Nordlys", "Aster", "Kestrel", "Marlow", "Juniper", "Halden",
                       "Orrin",   "Vesta", "Tamsin",  "Brisk",  "Cobalt",  "Lumen",
                       "Fable",   "Quill", "Ridgeway", "Sable", "Tundra",  "Wren"};
const Words kAdjectives = {"Classic", "Everyday", "Ultralight", "Heritage", "Compact",
                           "Premium", "Essential", "Relaxed",   "Modern",   "Rugged",
                           "Slim",    "Deluxe",   "Organic",   "Vintage",  "Pro"};
const Words kMaterials = {"Merino", "Linen", "Canvas", "Leather", "Bamboo", "Steel",
                          "Cotton", "Oak",   "Ceramic", "Cashmere", "Denim", "Walnut"};
const Words kNouns = {"Sweater", "Backpack", "Desk Lamp", "Tote Bag", "Water Bottle",
                      "Sneakers", "Throw Blanket", "Chef Knife", "Wall Clock", "Jacket",
                      "Headphones", "Coffee Grinder", "Duvet Cover", "Sunglasses",
                      "Watch", "Side Table", "Candle", "Yoga Mat", "Rain Boots", "Scarf"};
const Words kColors = {"Navy", "Forest Green", "Charcoal", "Sand", "Rust", "Ivory",
                       "Slate Blue", "Black", "Olive"};
const Words kShopStems = {"north", "harbor", "maple", "copper", "linden", "foxglove",
                          "stone", "willow", "summit", "ember", "meadow", "atlas",
                          "pebble", "cedar", "river", "orchid", "granite", "birch"};
const Words kShopTails = {"goods", "supply", "store", "market", "house", "outfitters",
                          "studio", "co", "shop", "trading", "depot", "lane"};
const Words kCategories = {"Women", "Men", "Home", "Kitchen", "Outdoor", "Accessories",
                           "Gifts", "New Arrivals", "Sale", "Brands", "Kids"};
const Words kFooterLinks = {"About us", "Careers", "Press", "Shipping policy", "Returns",
                            "Track order", "Contact", "Gift cards", "Store locator",
                            "Privacy policy", "Terms of service", "Accessibility",
                            "Affiliates", "Student discount", "Size guide"};
const Words kReviewers = {"Maria K.", "Jonas P.", "Aiko T.", "Sam R.", "Priya N.",
                          "Lena W.", "Tomasz B.", "Chloe D.", "Omar H.", "Ines V."};
const Words kReviewTitles = {"Exactly as described", "Great quality", "Would buy again",
                             "Runs a little small", "Lovely gift", "Solid value",
                             "Not bad at all", "Perfect for daily use"};
const Words kSentences = {
    "The fit is true to size and the stitching feels durable.",
    "Arrived quickly and was packed with care.",
    "I have been using it every day for two months now.",
    "The color is slightly darker than in the photos.",
    "Customer service answered my question within a day.",
    "It feels sturdy and well balanced in the hand.",
    "After a few washes it still looks brand new.",
    "Instructions were clear and setup took five minutes.",
    "My partner liked it so much that we ordered a second one.",
    "Good materials for the money, nothing fancy.",
    "The finish picks up fingerprints but cleans easily.",
    "Slightly heavier than expected, but that is a plus for me."};
const Words kSpecKeys = {"Material", "Dimensions", "Weight", "Care", "Origin",
                         "Warranty", "Model number", "Color", "Fit", "Capacity"};
const Words kSpecValues = {"See label", "32 x 24 x 12 cm", "450 g", "Machine wash cold",
                           "Made in Portugal", "2 years", "Regular", "1.5 L",
                           "Hand wash only", "Imported"};
const Words kArticleTitles = {"How to care for natural fabrics", "Our spring lookbook",
                              "Five ways to style a scarf", "Behind the scenes at the studio",
                              "A guide to choosing the right backpack"};

struct CurrencyStyle {
  std::string iso;
  std::string prefix;
  std::string suffix;
  char thousands;
  char decimal;
  bool minor_units;
  std::string tld;
};

const std::vector<CurrencyStyle>& CurrencyStyles() {
  static const std::vector<CurrencyStyle> styles = {
      {"USD", "$", "", ',', '.', true, "com"},
      {"EUR", "€", "", '.', ',', true, "de"},
      {"EUR", "", " €", '.', ',', true, "fr"},
      {"GBP", "£", "", ',', '.', true, "co.uk"},
      {"CAD", "CA$", "", ',', '.', true, "ca"},
      {"JPY", "¥", "", ',', '.', false, "co.jp"},
      {"INR", "₹", "", ',', '.', true, "in"},
      {"SEK", "", " kr", '.', ',', true, "se"},
      {"CHF", "CHF ", "", ',', '.', true, "ch"},
      {"AUD", "A$", "", ',', '.', true, "com.au"},
      {"KRW", "₩", "", ',', '.', false, "co.kr"},
      {"USD", "$", "", ',', '.', true, "com"},
      {"USD", "$", "", ',', '.', true, "shop"},
  };
  return styles;
}

const CurrencyStyle& StyleFor(const std::string& iso) {
  for (const CurrencyStyle& s : CurrencyStyles()) {
    if (s.iso == iso) return s;
  }
  throw Error(ErrorCode::kBadConfig, "no display style for currency " + iso);
}

std::string GroupDigits(int64_t v, char sep) {
  std::string digits = std::to_string(v);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out += sep;
    out += digits[i];
  }
  return out;
}

std::string Format(int64_t cents, const CurrencyStyle& s) {
  std::string number = GroupDigits(cents / 100, s.thousands);
  if (s.minor_units) {
    const int64_t minor = cents % 100;
    number += s.decimal;
    number += static_cast<char>('0' + minor / 10);
    number += static_cast<char>('0' + minor % 10);
  }
  return s.prefix + number + s.suffix;
}

std::string Canonical(int64_t cents) { return Decimal(cents, 2).ToString(); }

// Template family knobs. Families differ in markup, ordering and styling.
struct Family {
  int title_mode;   // 0 h1, 1 h1 with class font, 2 div with class font
  int list_markup;  // 0 s, 1 del, 2 strike, 3 class, 4 inline style
  bool sale_first;
  int image_mode;  // 0 sized img, 1 lazy data-src, 2 linked, 3 css sized lazy
  bool banner;
  bool big_promo;
  bool image_first;
  bool related_struck;
  bool breadcrumb;
  int label_style;  // 0 none, 1 Now/Was, 2 Sale/Regular, 3 inline RRP
  int title_px;
  int sale_px;
  std::string wrapper;  // main container tag
};

Family MakeFamily(int i) {
  Family f;
  f.title_mode = i % 3;
  f.list_markup = i % 5;
  f.sale_first = (i / 5) % 2 == 0;
  f.image_mode = (i / 2) % 4;
  f.banner = i % 4 == 1 || i % 7 == 3;
  f.big_promo = i % 6 == 2;
  f.image_first = i % 2 == 0;
  f.related_struck = i % 3 == 0;
  f.breadcrumb = i % 4 != 3;
  f.label_style = (i / 3) % 4;
  f.title_px = 26 + (i % 4) * 2;
  f.sale_px = 20 + (i % 5) * 2;
  static const char* wrappers[] = {"div", "main", "section", "article"};
  f.wrapper = wrappers[(i / 4) % 4];
  return f;
}

struct Domain {
  std::string name;
  std::string shop;
  std::string prefix;  // css class prefix
  const CurrencyStyle* currency;
  int family;
  bool dynamic;
  uint64_t seed;
};

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

std::string Slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      out += c;
    } else if (c >= 'A' && c <= 'Z') {
      out += static_cast<char>(c + 32);
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

int64_t DrawSaleCents(Rng& rng, const CurrencyStyle& s) {
  if (!s.minor_units) {
    const int64_t whole = s.iso == "KRW" ? rng.Range(9, 900) * 1000 : rng.Range(80, 4000) * 10;
    return whole * 100;
  }
  static const int endings[] = {99, 0, 95, 50, 49};
  const int64_t units = rng.Chance(0.15) ? rng.Range(1000, 2400) : rng.Range(6, 480);
  return units * 100 + endings[rng.Below(5)];
}

int64_t DrawListCents(Rng& rng, int64_t sale, const CurrencyStyle& s) {
  const double factor = 1.15 + 0.6 * rng.Uniform();
  int64_t list = static_cast<int64_t>(static_cast<double>(sale) * factor);
  if (!s.minor_units) return std::max<int64_t>(list / 1000 * 1000, sale + 1000);
  list = list / 100 * 100 + (rng.Chance(0.5) ? 99 : 0);
  return std::max(list, sale + 100);
}

class PageWriter {
 public:
  PageWriter(const Domain& d, Rng& rng) : d_(d), rng_(rng), p_(d.prefix) {}

  std::string Css(const Family& f, int main_w, int main_h) const {
    std::string css = "body{font-size:14px;color:#222}";
    css += "." + p_ + "-top{font-size:12px}";
    css += "." + p_ + "-brand{font-size:22px;font-weight:bold}";
    css += "." + p_ + "-nav{font-size:15px}";
    css += "." + p_ + "-promo{font-size:" + std::string(f.big_promo ? "40" : "18") + "px}";
    css += "." + p_ + "-crumbs{font-size:12px}";
    css += "." + p_ + "-title{font-size:" + std::to_string(f.title_px) + "px}";
    css += "." + p_ + "-sale{font-size:" + std::to_string(f.sale_px) + "px;color:#b00}";
    css += "." + p_ + "-list{font-size:15px;color:#777}";
    css += "." + p_ + "-was{font-size:15px;text-decoration:line-through}";
    css += "." + p_ + "-note{font-size:13px}";
    css += "." + p_ + "-card{font-size:14px}";
    css += "." + p_ + "-old{font-size:12px;text-decoration:line-through}";
    css += "." + p_ + "-foot{font-size:12px}";
    css += "." + p_ + "-hide{display:none}";
    css += "." + p_ + "-main{width:" + std::to_string(main_w) + "px;height:" +
           std::to_string(main_h) + "px}";
    css += "@media (max-width:600px){." + p_ + "-nav{display:none}}";
    return css;
  }

  std::string Head(const std::string& title, const std::string& css,
                   const std::string& extra = "") const {
    return "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\">"
           "<title>" + title + "</title><meta name=\"viewport\" "
           "content=\"width=device-width\"><link rel=\"stylesheet\" href=\"/assets/site.css\">"
           "<style>" + css + "</style>" + extra + "</head>\n<body>\n";
  }

  std::string Chrome(bool with_banner) {
    std::string h;
    h += "<div class=\"" + p_ + "-top\">Free shipping on orders over " +
         Format(d_.currency->minor_units ? 5000 : 500000, *d_.currency) + "</div>\n";
    h += "<header class=\"" + p_ + "-header\"><a href=\"/\"><img src=\"/static/logo.png\" "
         "width=\"160\" height=\"48\" alt=\"" + d_.shop + "\"></a> <span class=\"" + p_ +
         "-brand\">" + d_.shop + "</span> <a href=\"/account\">Sign in</a> "
         "<a href=\"/cart\">Cart (0)</a></header>\n";
    h += "<nav><ul class=\"" + p_ + "-nav\">";
    for (int i = 0; i < 8; ++i) {
      const std::string& c = kCategories[(i + d_.seed) % kCategories.size()];
      h += "<li><a href=\"/c/" + Slug(c) + "\">" + c + "</a></li>";
    }
    h += "</ul></nav>\n";
    if (with_banner) {
      h += "<div class=\"" + p_ + "-banner\"><a href=\"/sale\"><img src=\"/static/banner-" +
           std::to_string(rng_.Range(1, 9)) + ".jpg\" width=\"1200\" height=\"" +
           std::to_string(rng_.Range(200, 260)) + "\" alt=\"Season sale\"></a></div>\n";
    }
    static const Words promos = {"Mid-season sale: up to 40% off", "New arrivals every week",
                                 "Members get early access", "Last chance: winter styles"};
    h += "<div class=\"" + p_ + "-promo\">" + rng_.Pick(promos) + "</div>\n";
    return h;
  }

  std::string Footer() {
    std::string h = "<footer class=\"" + p_ + "-foot\">";
    static const Words heads = {"Customer care", "Company", "Shop", "Help"};
    for (int col = 0; col < 4; ++col) {
      h += "<div><h4>" + heads[col] + "</h4><ul>";
      for (int i = 0; i < 4; ++i) {
        const std::string& l = kFooterLinks[(col * 4 + i + d_.seed) % kFooterLinks.size()];
        h += "<li><a href=\"/pages/" + Slug(l) + "\">" + l + "</a></li>";
      }
      h += "</ul></div>";
    }
    h += "<p>Sign up for our newsletter and get 10% off your first order.</p>";
    h += "<p>&copy; 2026 " + d_.shop + ". All rights reserved.</p>";
    h += "<img src=\"/static/visa.svg\" width=\"38\" height=\"24\" alt=\"Visa\"> "
         "<img src=\"/static/mastercard.svg\" width=\"38\" height=\"24\" alt=\"Mastercard\">";
    h += "<img src=\"https://t.example-analytics.net/p.gif?id=" + std::to_string(d_.seed % 9973) +
         "\" width=\"1\" height=\"1\" alt=\"\">";
    h += "</footer>\n<script>window.dataLayer=window.dataLayer||[];</script>\n</body></html>\n";
    return h;
  }

  std::string ProductName() {
    std::string name = rng_.Pick(kBrands) + " " + rng_.Pick(kAdjectives) + " " +
                       rng_.Pick(kMaterials) + " " + rng_.Pick(kNouns);
    if (rng_.Chance(0.4)) name += " - " + rng_.Pick(kColors);
    return name;
  }

  std::string DocTitle(const std::string& name) {
    switch (rng_.Below(3)) {
      case 0:
        return name + " | " + d_.shop;
      case 1:
        return "Buy " + name + " Online - " + d_.shop;
      default:
        return d_.shop + ": " + name;
    }
  }

  std::string Cards(int n, bool struck, bool cart_buttons, int img_px) {
    std::string h;
    for (int i = 0; i < n; ++i) {
      const std::string name = ProductName();
      const int64_t cents = DrawSaleCents(rng_, *d_.currency);
      h += "<div class=\"" + p_ + "-card\"><a href=\"/products/" + Slug(name) +
           "\"><img src=\"/media/thumbs/" + Slug(name) + ".jpg\" width=\"" +
           std::to_string(img_px) + "\" height=\"" + std::to_string(img_px) + "\" alt=\"" +
           name + "\"></a><div><a href=\"/products/" + Slug(name) + "\">" + name +
           "</a></div><div><span>" + Format(cents, *d_.currency) + "</span>";
      if (struck && rng_.Chance(0.5)) {
        h += " <span class=\"" + p_ + "-old\">" +
             Format(DrawListCents(rng_, cents, *d_.currency), *d_.currency) + "</span>";
      }
      h += "</div>";
      if (cart_buttons) h += "<button>Add to cart</button>";
      h += "</div>\n";
    }
    return h;
  }

  std::string Reviews(int n) {
    std::string h = "<div class=\"" + p_ + "-reviews\"><h2>Customer reviews</h2>";
    h += "<div>" + std::to_string(rng_.Range(3, 5)) + "." + std::to_string(rng_.Range(0, 9)) +
         " out of 5 based on " + std::to_string(rng_.Range(12, 900)) + " reviews</div>";
    for (int i = 0; i < n; ++i) {
      h += "<div class=\"" + p_ + "-review\"><h4>" + rng_.Pick(kReviewTitles) + "</h4>";
      h += "<div>" + rng_.Pick(kReviewers) + " - verified buyer</div><p>";
      const int sentences = rng_.Range(2, 4);
      for (int s = 0; s < sentences; ++s) h += (s ? " " : "") + rng_.Pick(kSentences);
      if (rng_.Chance(0.1)) {
        h += " I paid " + Format(DrawSaleCents(rng_, *d_.currency), *d_.currency) +
             " during the holiday sale.";
      }
      h += "</p></div>";
    }
    return h + "</div>\n";
  }

  std::string Specs() {
    std::string h = "<div class=\"" + p_ + "-specs\"><h2>Product details</h2><table>";
    const int rows = rng_.Range(5, 9);
    for (int i = 0; i < rows; ++i) {
      h += "<tr><td>" + kSpecKeys[(i + d_.seed) % kSpecKeys.size()] + "</td> <td>" +
           rng_.Pick(kSpecValues) + "</td></tr>";
    }
    return h + "</table></div>\n";
  }

  const std::string& prefix() const { return p_; }
  const Domain& domain() const { return d_; }
  Rng& rng() { return rng_; }

 private:
  const Domain& d_;
  Rng& rng_;
  std::string p_;
};

struct Built {
  std::string html;
  std::string rendered;
  SyntheticTruth truth;
};

std::string ImageTag(const Family& f, const std::string& p, const std::string& src,
                     int w, int h, const std::string& alt) {
  const std::string dims =
      " width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) + "\"";
  const std::string gt = " data-gt=\"mainImage\"";
  switch (f.image_mode) {
    case 1:
      return "<img class=\"" + p + "-hero\" data-src=\"" + src + "\" loading=\"lazy\"" + dims +
             " alt=\"" + alt + "\"" + gt + ">";
    case 2:
      return "<a href=\"" + src + "?zoom=1\"><img src=\"" + src + "\"" + dims + " alt=\"" +
             alt + "\"" + gt + "></a>";
    case 3:
      return "<img class=\"" + p + "-main\" src=\"" + src + "\" loading=\"lazy\" alt=\"" + alt +
             "\"" + gt + ">";
    default:
      return "<img src=\"" + src + "\"" + dims + " alt=\"" + alt + "\"" + gt + ">";
  }
}

std::string ListTag(const Family& f, const std::string& p, const std::string& text) {
  const std::string gt = " data-gt=\"listPrice\"";
  switch (f.list_markup) {
    case 0:
      return "<s class=\"" + p + "-list\"" + gt + ">" + text + "</s>";
    case 1:
      return "<del class=\"" + p + "-list\"" + gt + ">" + text + "</del>";
    case 2:
      return "<strike class=\"" + p + "-list\"" + gt + ">" + text + "</strike>";
    case 3:
      return "<span class=\"" + p + "-was\"" + gt + ">" + text + "</span>";
    default:
      return "<span class=\"" + p + "-list\" style=\"text-decoration: line-through\"" + gt +
             ">" + text + "</span>";
  }
}

std::string PriceBlock(const Family& f, const std::string& p, const std::string& sale,
                       const std::optional<std::string>& list) {
  static const char* sale_labels[] = {"", "Now", "Sale price", "Our price"};
  static const char* list_labels[] = {"", "Was", "Regular price", "RRP"};
  std::string sale_html;
  if (f.label_style == 1 || f.label_style == 2) {
    sale_html += "<span class=\"" + p + "-note\">" + sale_labels[f.label_style] + "</span> ";
  }
  sale_html += "<span class=\"" + p + "-sale\" data-gt=\"salePrice\">" + sale + "</span>";
  std::string list_html;
  if (list) {
    if (f.label_style == 1 || f.label_style == 2) {
      list_html += "<span class=\"" + p + "-note\">" + list_labels[f.label_style] + "</span> ";
    }
    list_html += ListTag(f, p, f.label_style == 3 ? std::string("RRP ") + *list : *list);
  }
  std::string h = "<div class=\"" + p + "-prices\">";
  if (f.sale_first || !list) {
    h += sale_html + (list ? " " + list_html : "");
  } else {
    h += list_html + " " + sale_html;
  }
  return h + "</div>\n";
}

Built BuildProduct(PageWriter& w, const Family& f, const std::string& url, bool in_stock,
                   bool with_list) {
  Rng& rng = w.rng();
  const std::string& p = w.prefix();
  const CurrencyStyle& cur = *w.domain().currency;
  Built b;
  const std::string name = w.ProductName();
  const int64_t sale = DrawSaleCents(rng, cur);
  std::optional<int64_t> list;
  if (with_list) list = DrawListCents(rng, sale, cur);
  const int main_w = rng.Range(36, 56) * 10;
  const int main_h = f.image_mode == 3 ? main_w : rng.Range(36, 60) * 10;
  const std::string src = rng.Chance(0.5)
                              ? "/media/catalog/" + Slug(name) + ".jpg"
                              : "https://cdn." + w.domain().name + "/img/" + Slug(name) +
                                    "-main.jpg";

  b.truth.title = name;
  b.truth.main_image = ResolveUrl(url, src);
  b.truth.sale_price = Canonical(sale);
  if (list) b.truth.list_price = Canonical(*list);
  b.truth.currency = cur.iso;

  std::string head_extra = "<meta itemprop=\"price\" content=\"" + Canonical(sale) + "\">";
  const std::string head = w.Head(w.DocTitle(name), w.Css(f, main_w, main_h), head_extra);
  std::string top = w.Chrome(f.banner);
  if (f.breadcrumb) {
    top += "<div class=\"" + p + "-crumbs\"><a href=\"/\">Home</a> / <a href=\"/c/all\">" +
           kCategories[rng.Below(kCategories.size())] + "</a> / <span>" + name +
           "</span></div>\n";
  }

  std::string gallery = "<div class=\"" + p + "-gallery\">" +
                        ImageTag(f, p, src, main_w, main_h, name) + "<div>";
  const int thumbs = rng.Range(2, 4);
  for (int i = 0; i < thumbs; ++i) {
    gallery += "<img src=\"/media/catalog/" + Slug(name) + "-" + std::to_string(i + 2) +
               ".jpg\" width=\"80\" height=\"80\" alt=\"view " + std::to_string(i + 2) + "\"> ";
  }
  gallery += "</div></div>\n";

  std::string title_html;
  if (f.title_mode == 0) {
    title_html = "<h1 data-gt=\"title\">" + name + "</h1>\n";
  } else if (f.title_mode == 1) {
    title_html = "<h1 class=\"" + p + "-title\" data-gt=\"title\">" + name + "</h1>\n";
  } else {
    title_html = "<div class=\"" + p + "-title\" data-gt=\"title\">" + name + "</div>\n";
  }
  title_html += "<div class=\"" + p + "-note\">" + std::to_string(rng.Range(3, 5)) + "." +
                std::to_string(rng.Range(0, 9)) + " stars (" +
                std::to_string(rng.Range(3, 800)) + " reviews)</div>\n";

  const std::string sale_text = Format(sale, cur);
  const std::optional<std::string> list_text =
      list ? std::optional<std::string>(Format(*list, cur)) : std::nullopt;
  const std::string prices = PriceBlock(f, p, sale_text, list_text);

  std::string after = "";
  if (cur.minor_units && rng.Chance(0.6)) {
    after += "<div class=\"" + p + "-note\">or 4 interest-free payments of " +
             Format(sale / 4, cur) + "</div>\n";
  }
  if (list && rng.Chance(0.6)) {
    after += "<div class=\"" + p + "-note\">You save " + Format(*list - sale, cur) + "</div>\n";
  }
  after += "<span class=\"" + p + "-hide\">" + sale_text + "</span>";
  if (in_stock) {
    after += "<div class=\"" + p + "-stock\">In stock - ships in 1-2 business days</div>\n";
    after += "<div><button>Add to cart</button> <a href=\"/wishlist\">Save for later</a></div>\n";
  } else {
    after += "<div class=\"" + p + "-stock\">Out of stock</div>\n";
    after += "<div><button>Notify me when available</button></div>\n";
  }
  if (cur.minor_units && rng.Chance(0.5)) {
    after += "<div class=\"" + p + "-note\">Standard delivery " + Format(499, cur) + "</div>\n";
  }
  std::string desc = "<div class=\"" + p + "-desc\"><h2>Description</h2>";
  const int paras = rng.Range(1, 3);
  for (int i = 0; i < paras; ++i) {
    desc += "<p>";
    for (int s = 0; s < 3; ++s) desc += (s ? " " : "") + rng.Pick(kSentences);
    desc += "</p>";
  }
  desc += "</div>\n";

  // Dynamic domains ship the price markup inside a script; the pre-rendered
  // variant holds what the browser would show.
  const std::string static_prices =
      "<div class=\"" + p + "-prices\" id=\"price-mount\"></div><script>window.__STATE__={"
      "\"price\":\"" + sale_text + "\"" + (list_text ? ",\"was\":\"" + *list_text + "\"" : "") +
      "};hydrate(\"price-mount\");</script>\n";

  const auto assemble = [&](const std::string& price_html) {
    std::string body = "<" + f.wrapper + " class=\"" + p + "-product\">\n";
    if (f.image_first) body += gallery;
    body += title_html + price_html + after;
    if (!f.image_first) body += gallery;
    body += desc + "</" + f.wrapper + ">\n";
    return body;
  };
  std::string tail = w.Specs() + w.Reviews(rng.Range(2, 6));
  tail += "<div class=\"" + p + "-related\"><h3>You may also like</h3>\n" +
          w.Cards(rng.Range(4, 8), f.related_struck, false, 180) + "</div>\n";
  const std::string footer = w.Footer();

  b.rendered = head + top + assemble(prices) + tail + footer;
  b.html = w.domain().dynamic ? head + top + assemble(static_prices) + tail + footer
                              : b.rendered;
  return b;
}

Built BuildGray(PageWriter& w, const std::string& url) {
  Rng& rng = w.rng();
  const std::string& p = w.prefix();
  const CurrencyStyle& cur = *w.domain().currency;
  Built b;
  const std::string name = w.ProductName();
  const int64_t sale = DrawSaleCents(rng, cur);
  const std::string src = "/media/catalog/" + Slug(name) + ".jpg";
  b.truth.title = name;
  b.truth.main_image = ResolveUrl(url, src);
  b.truth.sale_price = Canonical(sale);
  b.truth.currency = cur.iso;
  Family plain = MakeFamily(0);
  std::string h = w.Head(name + " | " + w.domain().shop, w.Css(plain, 400, 400));
  h += w.Chrome(false);
  h += "<div class=\"" + p + "-product\"><h1 data-gt=\"title\">" + name + "</h1>";
  h += "<img src=\"" + src + "\" width=\"400\" height=\"400\" alt=\"" + name +
       "\" data-gt=\"mainImage\">";
  h += "<div class=\"" + p + "-prices\"><span class=\"" + p + "-sale\" data-gt=\"salePrice\">" +
       Format(sale, cur) + "</span></div>";
  h += "<div class=\"" + p + "-stock\">Currently unavailable</div></div>\n";
  h += w.Footer();
  b.html = b.rendered = h;
  return b;
}

Built BuildSoft404(PageWriter& w) {
  Rng& rng = w.rng();
  const std::string& p = w.prefix();
  Built b;
  static const Words heads = {"Page not found", "Oops! This product is no longer available",
                              "Error 404", "Sorry, we can't find that page"};
  static const Words bodies = {
      "The page you are looking for may have been moved or does not exist.",
      "It may have sold out or been removed from our catalogue.",
      "Check the address or try searching for what you need.",
      "Try one of the links below to get back on track."};
  const size_t variant = rng.Below(heads.size());
  Family plain = MakeFamily(0);
  std::string h = w.Head(variant == 0 ? "Page Not Found | " + w.domain().shop
                                      : w.domain().shop,
                         w.Css(plain, 400, 400));
  h += w.Chrome(rng.Chance(0.3));
  h += "<div class=\"" + p + "-error\"><h1>" + heads[variant] + "</h1><p>" +
       rng.Pick(bodies) + "</p><p>Search our store or head back to the <a href=\"/\">"
       "home page</a>.</p></div>\n";
  if (rng.Chance(0.6)) {
    h += "<div class=\"" + p + "-related\"><h3>Popular right now</h3>\n" +
         w.Cards(rng.Range(4, 8), false, rng.Chance(0.3), 160) + "</div>\n";
  }
  h += w.Footer();
  b.html = b.rendered = h;
  return b;
}

Built BuildJunk(PageWriter& w) {
  Rng& rng = w.rng();
  Built b;
  const std::string& dom = w.domain().name;
  std::string h;
  switch (rng.Below(4)) {
    case 0:
      h = "<!DOCTYPE html><html><head><title>" + dom + "</title></head><body>"
          "<div><h1>" + dom + "</h1><p>This domain may be for sale.</p>"
          "<p><a href=\"https://parking.example.net/inquire\">Inquire now</a></p>"
          "<p>Related searches: cheap flights, online degree, car insurance</p></div>"
          "</body></html>\n";
      break;
    case 1:
      h = "<!DOCTYPE html><html><head><title>Just a moment...</title></head><body>"
          "<div><h2>Checking your browser before accessing " + dom + "</h2>"
          "<p>Please verify you are a human.</p><p>Ray ID: " +
          std::to_string(rng.Next() % 1000000000) + "</p></div></body></html>\n";
      break;
    case 2:
      h = "<!DOCTYPE html><html><head><title>" + w.domain().shop + "</title></head><body>"
          "<noscript>You need to enable JavaScript to run this app.</noscript>"
          "<div id=\"root\"></div><script>boot()</script></body></html>\n";
      break;
    default:
      h = "<!DOCTYPE html><html><head><title>Coming soon</title></head><body>"
          "<div><img src=\"/static/logo.png\" width=\"160\" height=\"48\" alt=\"logo\">"
          "<h1>Something new is coming</h1><p>Lorem ipsum dolor sit amet, consectetur "
          "adipiscing elit.</p></div></body></html>\n";
      break;
  }
  b.html = b.rendered = h;
  return b;
}

Built BuildOther(PageWriter& w) {
  Rng& rng = w.rng();
  const std::string& p = w.prefix();
  Built b;
  Family plain = MakeFamily(0);
  const size_t variant = rng.Below(3);
  std::string h;
  if (variant == 0) {
    const std::string cat = rng.Pick(kCategories);
    h = w.Head(cat + " | " + w.domain().shop, w.Css(plain, 400, 400));
    h += w.Chrome(rng.Chance(0.5));
    h += "<div class=\"" + p + "-listing\"><h1>" + cat + "</h1><div>Showing 1-" +
         std::to_string(rng.Range(12, 24)) + " of " + std::to_string(rng.Range(40, 400)) +
         " products</div>\n" + w.Cards(rng.Range(10, 18), true, rng.Chance(0.5), 220) +
         "</div>\n";
  } else if (variant == 1) {
    const std::string title = rng.Pick(kArticleTitles);
    h = w.Head(title + " - Journal - " + w.domain().shop, w.Css(plain, 400, 400));
    h += w.Chrome(false);
    h += "<article><h1>" + title + "</h1><div>Posted in Journal</div>";
    h += "<img src=\"/blog/cover.jpg\" width=\"900\" height=\"420\" alt=\"cover\">";
    const int paras = rng.Range(4, 8);
    for (int i = 0; i < paras; ++i) {
      h += "<p>";
      for (int s = 0; s < 4; ++s) h += (s ? " " : "") + rng.Pick(kSentences);
      h += "</p>";
    }
    h += "</article>\n";
  } else {
    h = w.Head("About us | " + w.domain().shop, w.Css(plain, 400, 400));
    h += w.Chrome(false);
    h += "<div><h1>About " + w.domain().shop + "</h1><p>We started in a small workshop "
         "and still make most of our products by hand.</p><h2>Visit us</h2><p>Open Monday "
         "to Saturday, 10am to 6pm.</p><h2>Contact</h2><p>Write to hello@" +
         w.domain().name + "</p></div>\n";
  }
  h += w.Footer();
  b.html = b.rendered = h;
  return b;
}

void CheckConfig(const SynthConfig& c) {
  const auto bad = [](const std::string& what) { throw Error(ErrorCode::kBadConfig, what); };
  if (c.template_families < 2) bad("templateFamilies must be >= 2");
  if (c.num_domains < 1) bad("numDomains must be >= 1");
  if (c.pages_per_domain < 1) bad("pagesPerDomain must be >= 1");
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(c.dynamic_price_fraction)) bad("dynamicPriceFraction outside [0, 1]");
  if (!in_unit(c.list_price_fraction)) bad("listPriceFraction outside [0, 1]");
  const PageTypeMix& m = c.mix;
  for (double v : {m.product, m.soft404, m.junk, m.other, m.gray, m.gray_product_share}) {
    if (v < 0.0) bad("page type mix weights must be non-negative");
  }
  if (m.product + m.soft404 + m.junk + m.other + m.gray <= 0.0) bad("empty page type mix");
  if (!in_unit(m.gray_product_share)) bad("grayProductShare outside [0, 1]");
}

std::string StripMarkers(const std::string& html) {
  std::string out;
  size_t pos = 0;
  while (true) {
    const size_t at = html.find(" data-gt=\"", pos);
    if (at == std::string::npos) break;
    out.append(html, pos, at - pos);
    pos = html.find('"', at + 10) + 1;
  }
  out.append(html, pos);
  return out;
}

void CollectGt(const DomNode& node, std::vector<const DomNode*>& out) {
  ForEachElement(node, [&](const DomNode& el) {
    if (el.HasAttr("data-gt")) out.push_back(&el);
  });
}

}  // namespace

uint64_t Rng::Next() {
  // splitmix64
  uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t Rng::Below(uint64_t n) {
  if (n == 0) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = Next();
  } while (v >= limit);
  return v % n;
}

int Rng::Range(int lo, int hi) {
  return lo + static_cast<int>(Below(static_cast<uint64_t>(hi - lo + 1)));
}

double Rng::Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

std::string FormatPrice(int64_t cents, const std::string& iso) {
  return Format(cents, StyleFor(iso));
}

std::vector<SyntheticPage> GenerateSyntheticCorpus(const SynthConfig& config) {
  CheckConfig(config);
  Rng rng(config.seed);

  std::vector<Domain> domains;
  std::set<std::string> used;
  for (int d = 0; d < config.num_domains; ++d) {
    Domain dom;
    const CurrencyStyle& cur = CurrencyStyles()[rng.Below(CurrencyStyles().size())];
    std::string stem = rng.Pick(kShopStems);
    std::string tail = rng.Pick(kShopTails);
    std::string name = stem + tail + "." + cur.tld;
    for (int k = 2; used.count(name); ++k) name = stem + tail + std::to_string(k) + "." + cur.tld;
    used.insert(name);
    dom.name = name;
    dom.shop = Capitalize(stem) + " " + Capitalize(tail);
    dom.prefix = stem.substr(0, 3) + std::to_string(d);
    dom.currency = &cur;
    dom.family = d % config.template_families;
    dom.dynamic = false;
    dom.seed = rng.Next();
    domains.push_back(dom);
  }
  // Exactly round(fraction * n) dynamic domains, chosen by a seeded shuffle.
  std::vector<int> order(domains.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
  const int dynamic_count =
      static_cast<int>(config.dynamic_price_fraction * config.num_domains + 0.5);
  for (int i = 0; i < dynamic_count; ++i) domains[order[i]].dynamic = true;

  const PageTypeMix& m = config.mix;
  const double total = m.product + m.soft404 + m.junk + m.other + m.gray;
  std::vector<SyntheticPage> pages;
  for (const Domain& dom : domains) {
    Rng page_rng(dom.seed);
    PageWriter writer(dom, page_rng);
    const Family family = MakeFamily(dom.family);
    for (int i = 0; i < config.pages_per_domain; ++i) {
      SyntheticPage page;
      page.domain = dom.name;
      page.family = dom.family;
      page.dynamic_prices = dom.dynamic;
      page.page_id = dom.name + "/" + std::to_string(i);
      page.in_stock = i % 2 == 0;
      const double u = page_rng.Uniform() * total;
      Built built;
      if (u < m.product) {
        page.type = PageType::kProduct;
        page.url = "https://www." + dom.name + "/products/item-" + std::to_string(i);
        built = BuildProduct(writer, family, page.url, page.in_stock,
                             page_rng.Chance(config.list_price_fraction));
      } else if (u < m.product + m.gray) {
        page.gray = true;
        page.type = page_rng.Chance(m.gray_product_share) ? PageType::kProduct
                                                          : PageType::kSoft404;
        page.url = "https://www." + dom.name + "/products/item-" + std::to_string(i);
        built = BuildGray(writer, page.url);
        if (page.type != PageType::kProduct) {
          built.truth = SyntheticTruth{};
          built.html = built.rendered = StripMarkers(built.html);
        }
      } else if (u < m.product + m.gray + m.soft404) {
        page.type = PageType::kSoft404;
        page.url = "https://www." + dom.name + "/products/item-" + std::to_string(i);
        built = BuildSoft404(writer);
      } else if (u < m.product + m.gray + m.soft404 + m.junk) {
        page.type = PageType::kJunk;
        page.url = "https://" + dom.name + "/";
        if (i > 0) page.url += "p/" + std::to_string(i);
        built = BuildJunk(writer);
      } else {
        page.type = PageType::kOther;
        page.url = "https://www." + dom.name + "/pages/page-" + std::to_string(i);
        built = BuildOther(writer);
      }
      page.html = std::move(built.html);
      page.rendered_html = std::move(built.rendered);
      page.truth = std::move(built.truth);
      pages.push_back(std::move(page));
    }
  }
  return pages;
}

SyntheticTruth ParseGroundTruth(const DomNode& dom, const std::string& url) {
  std::vector<const DomNode*> marked;
  CollectGt(dom, marked);
  SyntheticTruth t;
  std::optional<std::string> sale_text;
  std::optional<std::string> list_text;
  for (const DomNode* node : marked) {
    const std::string& kind = *node->Attr("data-gt");
    if (kind == "title") {
      t.title = OwnText(*node);
    } else if (kind == "mainImage") {
      t.main_image = ResolveUrl(url, ImageSource(*node));
    } else if (kind == "salePrice" || kind == "listPrice") {
      const std::string text = OwnText(*node);
      auto m = FindPrice(text);
      if (!m) continue;
      if (kind == "salePrice") {
        t.sale_price = m->value.ToString();
        sale_text = text;
      } else {
        t.list_price = m->value.ToString();
        list_text = text;
      }
    }
  }
  if (t.title) t.currency = ResolveCurrency(sale_text, list_text);
  if (!t.sale_price && !t.list_price) t.currency.reset();
  return t;
}

PageLabels GroundTruthLabels(const DomNode& dom, const VprDocument& doc) {
  std::vector<const DomNode*> marked;
  CollectGt(dom, marked);
  PageLabels labels;
  for (const DomNode* node : marked) {
    const std::string& kind = *node->Attr("data-gt");
    const std::optional<int> id = FindXpathId(doc, DomXpath(*node));
    if (kind == "title") {
      labels.title = id;
    } else if (kind == "mainImage") {
      labels.main_image = id;
    } else if (kind == "salePrice") {
      labels.sale_price = id;
    } else if (kind == "listPrice") {
      labels.list_price = id;
    }
  }
  return labels;
}

}  // namespace vprex
