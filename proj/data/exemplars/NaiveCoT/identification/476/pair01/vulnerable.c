int lookup_value(struct list *list, const char *key)
{
    struct item *it = find(list, key);
    return it->value;
}
